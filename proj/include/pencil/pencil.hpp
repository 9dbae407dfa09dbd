#ifndef PENCIL_PENCIL_HPP
#define PENCIL_PENCIL_HPP

#include <pencil/coefficient.hpp>
#include <pencil/curve.hpp>
#include <pencil/dichotomy.hpp>
#include <pencil/error.hpp>
#include <pencil/expr.hpp>
#include <pencil/field.hpp>
#include <pencil/integrate.hpp>
#include <pencil/rational_function.hpp>
#include <pencil/report.hpp>
#include <pencil/sat.hpp>
#include <pencil/series.hpp>
#include <pencil/series_eval.hpp>
#include <pencil/trajectory.hpp>

#endif
