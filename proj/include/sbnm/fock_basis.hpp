// fock_basis.hpp: Excitation-truncated occupation-number basis for a bosonic bath

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sbnm::exact {

struct FockTruncation {
    int max_total_excitations{2};     // Σ n_k ≤ N_exc
    std::optional<int> per_mode_cap;  // n_k ≤ cap when present

    void validate() const;
};

// Default ceiling on the joint (spin ⊗ bath) dimension.
inline constexpr std::size_t default_max_dimension = 16'000'000;

// Number of bath configurations admitted by the truncation, saturating at SIZE_MAX.
std::size_t count_configurations(std::size_t n_modes, const FockTruncation& trunc);

// Bath configurations ordered by total excitation, then lexicographically by the
// sorted list of excited mode indices. Index 0 is the vacuum.
//
// Each non-vacuum configuration T carries one "lowering edge" per distinct
// occupied mode j: the index of T with one quantum removed from j, and √n_j(T).
// Those edges are exactly the nonzero matrix elements of a_j (and a_j† transposed).
class FockBasis {
public:
    struct Edge {
        std::uint32_t parent;  // configuration with one quantum fewer in `mode`
        std::uint32_t mode;
        double sqrt_n;         // √n_mode of the child configuration
    };

    FockBasis(std::size_t n_modes, FockTruncation trunc, std::size_t max_configurations);

    std::size_t size() const noexcept { return sector_offset_.back(); }
    std::size_t n_modes() const noexcept { return n_modes_; }
    const FockTruncation& truncation() const noexcept { return trunc_; }

    // Configurations with total excitation k occupy [sector_begin(k), sector_begin(k+1)).
    std::size_t sector_begin(int k) const { return sector_offset_.at(static_cast<std::size_t>(k)); }
    int total_excitations(std::size_t index) const;

    std::vector<int> occupation(std::size_t index) const;
    std::optional<std::size_t> index_of(std::span<const int> occupation) const;

    std::span<const Edge> edges(std::size_t index) const {
        return {edges_.data() + edge_offset_[index], edges_.data() + edge_offset_[index + 1]};
    }
    std::size_t edge_count() const noexcept { return edges_.size(); }

private:
    // Rank of a non-decreasing mode tuple among all uncapped tuples of the same length.
    std::uint64_t tuple_rank(std::span<const std::uint16_t> tuple) const;
    std::optional<std::size_t> lookup(std::span<const std::uint16_t> tuple) const;

    std::size_t n_modes_;
    FockTruncation trunc_;
    std::vector<std::size_t> sector_offset_;            // size N_exc + 2
    std::vector<std::vector<std::uint16_t>> tuples_;    // per sector, flat k-tuples
    std::vector<std::vector<std::uint64_t>> prefix_;    // prefix_[r][v] = Σ_{u<v} multisets(M-u, r)
    std::vector<std::vector<std::uint64_t>> ranks_;     // per sector, only when capped
    std::vector<std::size_t> edge_offset_;
    std::vector<Edge> edges_;
};

} // namespace sbnm::exact
