#pragma once

#include "qwindex/essential.hpp"
#include "qwindex/io.hpp"
#include "qwindex/winding.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qwindex {

/// One row per entry of the summary table of symmetry indices, plus bookkeeping.
struct IndexReport {
    std::string model;
    std::optional<int> si_plus, si_minus, si_total, susy_index;
    std::optional<int> tanaka_plus, tanaka_minus;
    std::optional<int> pair_index, pair_index_complement;
    std::optional<int> cayley_plus, cayley_minus;
    std::optional<int> generator_index;
    std::map<std::string, Certification> certifications;
    json winding;  // null when not applicable
    json details;  // model specific extras, omitted when null
    Tolerances tolerances;
    std::vector<double> borderline;
    std::vector<std::string> reasons;

    /// Identity pairs that are both present but disagree.
    std::vector<std::string> consistency_violations() const;
    /// True when every certification that gates an index is certified.
    bool gates_passed() const;
};

json certification_to_json(const Certification& c);
json report_to_json(const IndexReport& r);

/// Finite-dimensional chiral unitary: every index by its own route.
IndexReport finite_report(const CRef& u, const CRef& gamma0, const Tolerances& tol);

/// Lattice chiral pair: certifications, then indices from the transfer oracle and the winding section.
IndexReport lattice_report(const ChiralPair& pair, const Tolerances& tol);

/// Banded operator without chiral structure: index and symbol windings.
IndexReport banded_report(const BandedOperatorcd& f, const Tolerances& tol);

/// Non-chiral lattice unitary: det windings of both symbols.
IndexReport unitary_winding_report(const BandedOperatorcd& u, const Tolerances& tol);

struct LatticeKernels {
    std::optional<int> si_plus, si_minus, si_total, susy_index;
    std::optional<int> tanaka_plus, tanaka_minus, pair_index, pair_index_complement;
};

/// Kernel dimensions of the banded combinations whose kernels are the relevant intersections.
LatticeKernels lattice_indices(const ChiralPair& pair, bool gap_plus, bool gap_minus, const TransferOptions& opts,
                               std::vector<double>* borderline = nullptr);

}  // namespace qwindex
