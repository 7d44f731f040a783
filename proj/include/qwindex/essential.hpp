#pragma once

#include "qwindex/walks.hpp"

#include <string>

namespace qwindex {

enum class CertStatus { Certified, Refuted, Inconclusive };

const char* to_string(CertStatus s);

struct Certification {
    CertStatus status = CertStatus::Inconclusive;
    double value = 0;        // measured quantity (norm or gap size)
    double resolution = 0;   // Lipschitz bound times half the grid spacing
    double margin = 0;
    int grid_n = 0;
    std::string what;

    bool certified() const { return status == CertStatus::Certified; }
};

struct EssentialNorm {
    double value = 0;
    int grid_n = 0;
};

/// max over both sides and the circle grid of the spectral norm of the symbol.
/// With refine, the grid doubles until two successive values differ by < 1e-6 (cap 2^16).
EssentialNorm essential_norm(const BandedOperatorcd& a, int grid_n = 4096, bool refine = true);

/// Smallest singular value of symbol(z) - target over both sides and the grid.
double min_singular_gap(const BandedOperatorcd& a, cplx target, int grid_n);

/// ||1 - U||_ess < 2 - margin; sign = -1 checks ||1 + U||_ess instead.
Certification is_fredholm_type(const BandedOperatorcd& u, int grid_n = 4096, double margin = 1e-6, int sign = +1);

/// Gap of the symbols of U at target = +1 or -1.
Certification gap_at(const BandedOperatorcd& u, int target, int grid_n = 4096, double margin = 1e-6);

/// inf over the circle of the smallest singular value of both symbols exceeds margin.
Certification invertibility(const BandedOperatorcd& a, int grid_n = 4096, double margin = 1e-6);

struct DichotomyReport {
    double norm_difference = 0;  // ||Gamma0 - Gamma1||_ess
    double norm_sum = 0;         // ||Gamma0 + Gamma1||_ess
    bool holds = false;
};

DichotomyReport dichotomy_check(const ChiralPair& pair, int grid_n = 4096, double margin = 1e-6);

}  // namespace qwindex
