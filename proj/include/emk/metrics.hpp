#ifndef EMK_METRICS_HPP
#define EMK_METRICS_HPP

#include <string>
#include <vector>

#include "emk/preprocess.hpp"
#include "emk/types.hpp"

namespace emk {

struct PhaseTiming {
    std::string phase;
    double seconds = 0.0;
};

/// Everything a separation run reports: the composed gain matrix, its ISR,
/// the estimate-to-source pairing with correlations, and wall-clock figures.
struct SeparationReport {
    Matrix gain;
    double isr_db = 0.0;
    std::vector<Index> permutation;  // estimate row -> paired true source
    Vector correlations;             // |corr| per estimate row, in [0, 1]
    std::vector<PhaseTiming> timing;
    double speedup = 0.0;  // t_sequential / t_parallel; 0 when not measured
};

/// Overall system response G = W * V * A from sources to estimates.
Matrix gain_matrix(const Matrix& W, const WhiteningTransform& whitening,
                   const Matrix& A);

/// Average interference-to-signal ratio of a gain matrix in dB: rows are
/// aligned to their dominant columns by an optimal assignment on |G|, each
/// row contributes (sum of squared off-target entries) / (squared target
/// entry), and the row average is reported as 10 log10 with a -300 dB floor.
/// Invariant under row/column permutations, sign flips, and row scalings.
/// Throws DegenerateGain when an assigned target entry is zero.
double isr_db(const Matrix& G);

struct Pairing {
    std::vector<Index> permutation;  // estimate row -> true source index
    Vector correlations;
};

/// Pairs estimated sources with true ones by maximizing the total absolute
/// Pearson correlation over all bijections (optimal assignment).
/// Throws DegenerateSource on a zero-variance row.
Pairing pair_sources(const Matrix& S_true, const Matrix& Y);

/// Amdahl's bound 1 / ((1 - f) + f / s) for parallelizable fraction f and
/// parallel-part speedup s.
double amdahl_speedup(double f, double s);

/// Exact solver for the linear assignment problem: returns the permutation
/// (row -> column) maximizing the sum of selected scores. O(n^3) Hungarian
/// method with potentials; ties resolve to the lowest column index.
std::vector<Index> solve_assignment_max(const Matrix& score);

}  // namespace emk

#endif
