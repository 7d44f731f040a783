#pragma once

#include "qwindex/walks.hpp"

#include <random>

namespace qwindex {

typedef std::mt19937_64 Rng;

/// Per-trial seed so that trial k does not depend on how many draws earlier trials used.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

MatrixXc random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Haar-distributed unitary (QR of a complex Gaussian with phase correction).
MatrixXc random_unitary(Eigen::Index n, Rng& rng);

/// V diag(1_k, -1_{n-k}) V*.
MatrixXc random_grading(Eigen::Index n, Eigen::Index k, Rng& rng);

MatrixXc random_projection(Eigen::Index n, Eigen::Index rank, Rng& rng);

/// Two gradings in a random basis, built from the canonical form of a pair of projections.
/// The 1-dim blocks carry (P0, P1) = (1,1), (1,0), (0,1), (0,0); generic 2x2 blocks carry a rotation.
struct FiniteChiralInstance {
    MatrixXc gamma0, gamma1;
    int n11 = 0, n10 = 0, n01 = 0, n00 = 0, generic_blocks = 0;

    MatrixXc u() const { return gamma0 * gamma1; }
    int pair_index() const { return n10 - n01; }
    int pair_index_complement() const { return n11 - n00; }
    int trace_gamma0() const { return n11 + n10 - n01 - n00; }
};

FiniteChiralInstance random_chiral_instance(Eigen::Index max_dim, Rng& rng);

/// Gradings drawn independently with random ranks (no built-in intersections).
FiniteChiralInstance random_generic_chiral_instance(Eigen::Index max_dim, Rng& rng);

/// H = [[0, B*], [B, 0]] in a random basis, scaled to norm at most 1; B has a random rank deficit.
struct FiniteGenerator {
    MatrixXc h, gamma0;
    int expected_index = 0;  // dim Ker B - dim Ker B*
};

FiniteGenerator random_chiral_generator(Eigen::Index max_dim, Rng& rng);

/// Split-step coins with |a - c| and |a + c| bounded away from 0 on both sides (both symbol gaps open),
/// a random bulk defect of up to three sites and shift exponent 1 or 2.
SplitStepParams random_gapped_split_step(Rng& rng);

/// Split-step coins with unrestricted limits (gaps may close).
SplitStepParams random_split_step(Rng& rng);

/// Banded operator whose limit symbols are small perturbations of U diag(z^{m_i}) V,
/// so both symbols are invertible; random bulk rows on a few sites.
BandedOperatorcd random_banded_operator(Rng& rng);

}  // namespace qwindex
