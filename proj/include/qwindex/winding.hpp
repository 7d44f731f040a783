#pragma once

#include "qwindex/transfer.hpp"
#include "qwindex/walks.hpp"

#include <string>
#include <vector>

namespace qwindex {

struct WindingResult {
    double raw_phase = 0;       // accumulated arg(det) / 2 pi
    int rounded = 0;
    double max_step_phase = 0;  // largest single-step phase increment
    int grid_n = 0;
    double min_abs_det = 0;
};

/// Winding of det(loop(z)) by phase unwinding; the grid doubles until every step is below pi/2.
WindingResult winding_det(const SymbolLoopcd& loop, int grid_n = 4096);

/// Single pass over given determinant samples at z_k = e^{2 pi i k / N} (no refinement).
WindingResult winding_of_samples(const std::vector<cplx>& dets);

struct NcWinding {
    double value = 0;     // trapezoidal value of (1/2 pi i) oint tau(F^{-1} F') dz
    Rational rational;    // value rounded onto the lattice (1/d) Z
    int grid_n = 0;
};

NcWinding nc_winding(const SymbolLoopcd& loop, int grid_n = 4096);

enum class CompressedBlock {
    CayleyMinus,     // sign(C(u)) with C(u) = i(1+u)(1-u)^{-1}
    CayleyPlus,      // sign(C(-u))
    Supersymmetric,  // q = (u - u*)/2i
};

const char* to_string(CompressedBlock b);

/// Off-diagonal block e_-(z)* X(z) e_+(z) of a chiral symbol, sampled on the circle grid.
struct SampledLoop {
    int grid_n = 0;
    Eigen::Index dim = 0;
    std::vector<MatrixXc> values;
    double holonomy_phase = 0;     // arg det of the e_+ closure holonomy
    double unitarity_defect = 0;   // max over samples (meaningful for the Cayley blocks)
};

/// The frames e_+(z), e_-(z) span Ran p0(z) and Ran(1 - p0(z)); they are propagated along the grid
/// by projection and polar re-orthonormalisation, then corrected by the closure holonomy.
/// start_plus / start_minus optionally rotate the starting frames (unitary, d/2 x d/2).
SampledLoop chiral_flat_band_symbol(const ChiralPair& pair, Side side, int grid_n,
                                    CompressedBlock block = CompressedBlock::CayleyMinus,
                                    const MatrixXc* start_plus = nullptr, const MatrixXc* start_minus = nullptr);

/// Det winding of the compressed block, refining the grid until every phase step is below pi/2.
WindingResult compressed_winding(const ChiralPair& pair, Side side, int grid_n, CompressedBlock block,
                                 const MatrixXc* start_plus = nullptr, const MatrixXc* start_minus = nullptr);

struct IndexTheoremRecord {
    std::string label;
    Rational lhs;          // tau-normalised index from the transfer oracle
    Rational wind_left, wind_right;
    bool holds = false;           // lhs = Wind(F_L) - Wind(F_R)
    bool holds_as_stated = false; // lhs = Wind(F_R) - Wind(F_L)
};

IndexTheoremRecord verify_index_theorem(const BandedOperatorcd& f, int grid_n = 4096,
                                        const TransferOptions& opts = {});

struct ChiralTheoremReport {
    int si_plus = 0, si_minus = 0, si_total = 0;  // transfer oracle
    std::vector<IndexTheoremRecord> records;      // cayley_minus, cayley_plus, supersymmetric
    bool holds() const;
    bool holds_as_stated() const;
};

/// Needs both symbol gaps and a grading with equal limits on both sides.
ChiralTheoremReport verify_index_theorem(const ChiralPair& pair, int grid_n = 4096, const TransferOptions& opts = {});

}  // namespace qwindex
