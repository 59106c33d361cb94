#pragma once

// Gaussian expectations of products of single-mode phase-space symbols.
//
// Each single-mode symbol factorizes as M(p) * Q(q) with M in {1, cos(l p),
// sin(l p)} and Q either the bin-parity square wave S(q) (+1 on [2kl,(2k+1)l),
// -1 otherwise) or the shifted indicator 1 + S(q - l/2). Expanding S in its
// Fourier series turns every product into a sum of plane waves whose Gaussian
// expectation is exp(i u.m - u^T Sigma u / 2) with Sigma = sigma / 2.

#include "gaussbell/gaussian_core.hpp"

namespace gaussbell {

enum class MomentumFactor { One, Cos, Sin };
enum class PositionFactor { SquareWave, ShiftedEvenBins };

struct ModeSymbol {
  MomentumFactor momentum = MomentumFactor::One;
  PositionFactor position = PositionFactor::SquareWave;
};

inline constexpr ModeSymbol kSymbolZ{MomentumFactor::One, PositionFactor::SquareWave};
inline constexpr ModeSymbol kSymbolX{MomentumFactor::Cos, PositionFactor::ShiftedEvenBins};
inline constexpr ModeSymbol kSymbolY{MomentumFactor::Sin, PositionFactor::ShiftedEvenBins};

/// Bin parity: +1 if floor(q / l) is even, -1 otherwise.
double square_wave(double q, double l);

/// Pointwise value of a single-mode symbol.
double symbol_value(const ModeSymbol& s, double l, double q, double p);

struct HarmonicResult {
  double value = 0.0;
  double error = 0.0;  // rigorous bound on the truncation error
  int max_harmonic = 0;
};

/// E_W[s1(q1, p1) s2(q2, p2)] with odd harmonics up to the smallest order
/// whose tail bound is <= tol. Throws AccuracyError when that order would
/// exceed max_harmonic.
HarmonicResult harmonic_expectation(const GaussianState& state, double l, const ModeSymbol& s1,
                                    const ModeSymbol& s2, double tol, int max_harmonic);

/// Highest odd harmonic harmonic_expectation would need for this tolerance.
int harmonic_order_needed(const GaussianState& state, double l, double tol, int cap);

}  // namespace gaussbell
