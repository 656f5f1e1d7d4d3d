#pragma once

// Randomized and exhaustive invariant checks shared by the unit tests and the
// acceptance runner.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "heckelab/finmod.hpp"
#include "heckelab/lagrange.hpp"
#include "heckelab/partitions.hpp"

namespace props {

struct Result {
    bool ok = true;
    std::size_t cases = 0;
    std::string detail;  // first failure, if any

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

heckelab::Matrix random_matrix(heckelab::RingCtx ctx, std::size_t rows, std::size_t cols, std::mt19937_64& rng);
// Rows replaced by an invertible recombination, plus redundant combinations, shuffled.
heckelab::Matrix remix_rows(const heckelab::Matrix& m, std::mt19937_64& rng);
// Product of random transvections and its inverse.
std::pair<heckelab::Matrix, heckelab::Matrix> random_symplectic(const heckelab::SymplecticSpace& s, std::mt19937_64& rng,
                                                                int steps = 12);

// Census cell sizes and sorted fiber counts, as text, for comparing models.
std::string census_signature(const std::vector<heckelab::Submodule>& ws, const heckelab::FlagData& flags,
                             heckelab::Scheme scheme);

Result canonical_uniqueness(int cases, std::uint64_t seed);
Result duality_involution(int cases, std::uint64_t seed);
Result partition_exhaustiveness();
Result omega_choice_independence(std::uint64_t seed);
Result flag_choice_independence(std::uint64_t seed);
Result thread_determinism();

}  // namespace props
