// fock_basis.cpp: Enumeration, ranking and lowering edges of the truncated bath basis

#include "sbnm/fock_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sbnm/errors.hpp"

namespace sbnm::exact {

namespace {

constexpr std::uint64_t saturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return (a > saturated - b) ? saturated : a + b;
}

int effective_cap(const FockTruncation& trunc) {
    return trunc.per_mode_cap ? std::min(*trunc.per_mode_cap, trunc.max_total_excitations)
                              : trunc.max_total_excitations;
}

// multisets[r][n] = number of non-decreasing r-tuples drawn from n values.
std::vector<std::vector<std::uint64_t>> multiset_table(std::size_t n_values, int max_r) {
    std::vector<std::vector<std::uint64_t>> t(static_cast<std::size_t>(max_r) + 1,
                                              std::vector<std::uint64_t>(n_values + 1, 0));
    for (std::size_t n = 0; n <= n_values; ++n) t[0][n] = 1;
    for (std::size_t r = 1; r < t.size(); ++r)
        for (std::size_t n = 1; n <= n_values; ++n)
            t[r][n] = sat_add(t[r][n - 1], t[r - 1][n]);  // last value unused / used
    return t;
}

} // namespace

void FockTruncation::validate() const {
    if (max_total_excitations < 0)
        throw ConfigError("truncation: max_total_excitations must be >= 0");
    if (per_mode_cap && *per_mode_cap < 1)
        throw ConfigError("truncation: per_mode_cap must be >= 1 when present");
}

std::size_t count_configurations(std::size_t n_modes, const FockTruncation& trunc) {
    trunc.validate();
    const int n_exc = trunc.max_total_excitations;
    const int cap = effective_cap(trunc);
    std::vector<std::uint64_t> ways(static_cast<std::size_t>(n_exc) + 1, 0);
    ways[0] = 1;
    for (std::size_t m = 0; m < n_modes; ++m) {
        std::vector<std::uint64_t> next(ways.size(), 0);
        for (int s = 0; s <= n_exc; ++s) {
            if (ways[static_cast<std::size_t>(s)] == 0) continue;
            for (int n = 0; n <= cap && s + n <= n_exc; ++n)
                next[static_cast<std::size_t>(s + n)] =
                    sat_add(next[static_cast<std::size_t>(s + n)], ways[static_cast<std::size_t>(s)]);
        }
        ways.swap(next);
    }
    std::uint64_t total = 0;
    for (auto w : ways) total = sat_add(total, w);
    if (total > std::numeric_limits<std::size_t>::max()) return std::numeric_limits<std::size_t>::max();
    return static_cast<std::size_t>(total);
}

FockBasis::FockBasis(std::size_t n_modes, FockTruncation trunc, std::size_t max_configurations)
    : n_modes_(n_modes), trunc_(trunc) {
    trunc_.validate();
    if (n_modes_ > std::numeric_limits<std::uint16_t>::max())
        throw ConfigError("fock basis: at most 65535 modes supported");
    const std::size_t total = count_configurations(n_modes_, trunc_);
    const std::size_t limit = std::min<std::size_t>(max_configurations, std::numeric_limits<std::uint32_t>::max());
    if (total > limit)
        throw ResourceError("fock basis: " + std::to_string(total) + " bath configurations exceed the limit of " +
                                std::to_string(limit),
                            total);

    const int n_exc = trunc_.max_total_excitations;
    const int cap = effective_cap(trunc_);
    const bool capped = cap < n_exc;

    // Uncapped rank tables. Ranks must stay exact, so saturation is fatal here.
    const auto multisets = multiset_table(n_modes_, std::max(n_exc - 1, 0));
    prefix_.assign(multisets.size(), std::vector<std::uint64_t>(n_modes_ + 1, 0));
    for (std::size_t r = 0; r < multisets.size(); ++r) {
        for (std::size_t v = 0; v < n_modes_; ++v) {
            const std::uint64_t m = multisets[r][n_modes_ - v];
            if (m == saturated || prefix_[r][v] > saturated - m - 1)
                throw ResourceError("fock basis: rank space overflows 64 bits", total);
            prefix_[r][v + 1] = prefix_[r][v] + m;
        }
    }

    tuples_.resize(static_cast<std::size_t>(n_exc) + 1);
    sector_offset_.assign(static_cast<std::size_t>(n_exc) + 2, 0);
    sector_offset_[1] = 1;  // vacuum
    for (int k = 1; k <= n_exc; ++k) {
        const auto& parents = tuples_[static_cast<std::size_t>(k - 1)];
        auto& out = tuples_[static_cast<std::size_t>(k)];
        const std::size_t pk = static_cast<std::size_t>(k - 1);
        const std::size_t n_parents = (k == 1) ? 1 : parents.size() / pk;
        for (std::size_t p = 0; p < n_parents; ++p) {
            const std::uint16_t* s = (k == 1) ? nullptr : parents.data() + p * pk;
            const std::uint16_t last = (k == 1) ? 0 : s[pk - 1];
            int run = 0;
            for (std::size_t q = pk; q > 0 && s[q - 1] == last; --q) ++run;
            for (std::size_t j = last; j < n_modes_; ++j) {
                if (j == last && run + 1 > cap) continue;
                if (k > 1) out.insert(out.end(), s, s + pk);
                out.push_back(static_cast<std::uint16_t>(j));
            }
        }
        sector_offset_[static_cast<std::size_t>(k) + 1] =
            sector_offset_[static_cast<std::size_t>(k)] + out.size() / static_cast<std::size_t>(k);
    }

    if (capped) {
        ranks_.resize(tuples_.size());
        for (std::size_t k = 1; k < tuples_.size(); ++k) {
            const auto& tk = tuples_[k];
            ranks_[k].reserve(tk.size() / k);
            for (std::size_t i = 0; i < tk.size(); i += k)
                ranks_[k].push_back(tuple_rank({tk.data() + i, k}));
        }
    }

    // Lowering edges, one per distinct occupied mode.
    edge_offset_.assign(size() + 1, 0);
    std::vector<std::uint16_t> scratch;
    for (std::size_t k = 1; k < tuples_.size(); ++k) {
        const auto& tk = tuples_[k];
        const std::size_t base = sector_offset_[k];
        for (std::size_t i = 0; i < tk.size() / k; ++i) {
            const std::uint16_t* s = tk.data() + i * k;
            std::size_t q = 0;
            while (q < k) {
                std::size_t r = q;
                while (r < k && s[r] == s[q]) ++r;
                scratch.assign(s, s + k);
                scratch.erase(scratch.begin() + static_cast<std::ptrdiff_t>(r - 1));
                const auto parent = lookup(scratch);
                if (!parent) throw NumericalError("fock basis: parent configuration missing");
                edges_.push_back({static_cast<std::uint32_t>(*parent), s[q], std::sqrt(static_cast<double>(r - q))});
                q = r;
            }
            edge_offset_[base + i + 1] = edges_.size();
        }
    }
}

std::uint64_t FockBasis::tuple_rank(std::span<const std::uint16_t> tuple) const {
    const std::size_t k = tuple.size();
    std::uint64_t rank = 0;
    std::size_t prev = 0;
    for (std::size_t p = 0; p < k; ++p) {
        const auto& pre = prefix_[k - p - 1];
        rank += pre[tuple[p]] - pre[prev];
        prev = tuple[p];
    }
    return rank;
}

std::optional<std::size_t> FockBasis::lookup(std::span<const std::uint16_t> tuple) const {
    const std::size_t k = tuple.size();
    if (k == 0) return 0;
    if (k >= tuples_.size()) return std::nullopt;
    const std::uint64_t rank = tuple_rank(tuple);
    if (ranks_.empty()) return sector_offset_[k] + static_cast<std::size_t>(rank);
    const auto& r = ranks_[k];
    const auto it = std::lower_bound(r.begin(), r.end(), rank);
    if (it == r.end() || *it != rank) return std::nullopt;
    return sector_offset_[k] + static_cast<std::size_t>(it - r.begin());
}

int FockBasis::total_excitations(std::size_t index) const {
    if (index >= size()) throw std::out_of_range("fock basis: index out of range");
    const auto it = std::upper_bound(sector_offset_.begin(), sector_offset_.end(), index);
    return static_cast<int>(it - sector_offset_.begin()) - 1;
}

std::vector<int> FockBasis::occupation(std::size_t index) const {
    const int k = total_excitations(index);
    std::vector<int> occ(n_modes_, 0);
    if (k == 0) return occ;
    const std::size_t ku = static_cast<std::size_t>(k);
    const std::uint16_t* s = tuples_[ku].data() + (index - sector_offset_[ku]) * ku;
    for (std::size_t p = 0; p < ku; ++p) ++occ[s[p]];
    return occ;
}

std::optional<std::size_t> FockBasis::index_of(std::span<const int> occupation) const {
    if (occupation.size() != n_modes_) return std::nullopt;
    std::vector<std::uint16_t> tuple;
    for (std::size_t j = 0; j < n_modes_; ++j) {
        const int n = occupation[j];
        if (n < 0) return std::nullopt;
        if (trunc_.per_mode_cap && n > *trunc_.per_mode_cap) return std::nullopt;
        if (static_cast<int>(tuple.size()) + n > trunc_.max_total_excitations) return std::nullopt;
        tuple.insert(tuple.end(), static_cast<std::size_t>(n), static_cast<std::uint16_t>(j));
    }
    return lookup(tuple);
}

} // namespace sbnm::exact
