#ifndef LRGD_FUNCSPEC_HPP
#define LRGD_FUNCSPEC_HPP

#include <string>

#include "lrgd/functions.hpp"

namespace lrgd {

/// Parses the declarative objective grammar used by the bench CLI:
///
///   (quadratic (diag 3 1))
///   (quadratic (rows (3 0) (0 1)))
///   (ridge (profile squares) (rows (1 0 0) (0 1 0)))
///   (ridge (profile nonconvex 2.0) (rows ...))
///   (ridge (profile quadratic 8 1) (rows ...))
///   (geometric 3)          -- coordinate product, rank p
///   (loggeometric 3)       -- its log transform, rank 1
///   (scale 2 <spec>)
///   (sum <spec> <spec>)
///   (product <spec> <spec>)
///   (exp <spec>)
///
/// Profiles: squares | quadratic d1 ... dr | nonconvex [a] | cubic | sine |
/// linear.
Objective parse_objective(const std::string& spec);

} // namespace lrgd

#endif
