#pragma once

namespace kies {

/// Natural log of the gamma function for x > 0.
double ln_gamma(double x);

/// Euler beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).
double beta_fn(double a, double b);

/// Confluent hypergeometric function 1F1(a; b; x) restricted to b > a > 0 and
/// x <= 0, the range needed by beta mixing laws. Result lies in (0, 1].
///
/// Evaluated through Kummer's transformation 1F1(a;b;x) = e^x 1F1(b-a;b;-x),
/// whose series has only positive terms. For |x| > 30 the series is allowed up
/// to kHyp1F1TermCap terms; past that the leading large-argument term
/// Gamma(b)/Gamma(b-a) |x|^(-a) is used.
double hyp1f1(double a, double b, double x);

/// d/dx 1F1(a; b; x) = (a / b) 1F1(a + 1; b + 1; x).
double hyp1f1_deriv(double a, double b, double x);

/// Leading large-|x| term of 1F1(a; b; x) for x -> -infinity.
double hyp1f1_asymptotic(double a, double b, double x);

inline constexpr int kHyp1F1TermCap = 500;
inline constexpr double kHyp1F1SeriesLimit = 30.0;

}  // namespace kies
