#pragma once
// Discrete norms: uniform weights in x, trapezoid weights in y.
//
// L2   sqrt( hx * sum_i trapz_j f^2 )
// H1   sqrt( L2^2 + L2(dx f)^2 + L2(dy f)^2 )
// H2   sqrt( H1^2 + all four second-derivative combinations )
// L4   ( hx * sum_i trapz_j f^4 )^(1/4)
// Linf max |f| over every node
//
// Vector fields use the pointwise Euclidean magnitude. Sums always run
// j inner, i outer, in index order, so results are reproducible bit for
// bit. By construction L2 <= H1 <= H2 on any field.

#include <string>

#include "mcnv/grid.hpp"

namespace mcnv {

enum class NormKind { L2, H1, H2, L4, Linf };

NormKind norm_kind_from_string(const std::string& s);
std::string to_string(NormKind k);

double norm(const ScalarField& f, NormKind kind);
double norm(const VectorField& f, NormKind kind);

// sqrt(H2^2 - L2^2): the full H1 norm of the gradient, i.e. first plus
// second derivatives without the zeroth-order term.
double grad_h1_norm(const ScalarField& f);
double grad_h1_norm(const VectorField& f);

// L4 norm of the gradient magnitude |grad f|.
double grad_l4_norm(const ScalarField& f);
double grad_l4_norm(const VectorField& f);

}  // namespace mcnv
