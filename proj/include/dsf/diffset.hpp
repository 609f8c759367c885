#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsf/types.hpp"

namespace dsf::diffset {

// (N, K, lambda) parameter triple. A default-constructed or hand-built value
// may violate the counting identity; valid() checks it.
struct Params {
    int N = 0;
    int K = 0;
    int lambda = 0;

    // K(K-1) = lambda(N-1), 1 <= lambda <= K, 1 <= K <= N, N >= 2.
    bool valid() const noexcept;

    friend bool operator==(const Params&, const Params&) = default;
};

std::string to_string(const Params& p);

// lambda = K(K-1)/(N-1) when that is a positive integer not exceeding K.
std::optional<Params> derive_params(int N, int K);

struct VerificationReport {
    bool is_difference_set = false;
    // Multiplicity of every nonzero residue 1..N-1 among ordered differences.
    std::map<int, int> difference_counts;
    // Common multiplicity when all counts agree.
    std::optional<int> inferred_lambda;
    // inferred_lambda agrees with derive_params(N, K).
    bool params_consistent = false;
};

// Exact integer counting of u_k - u_l mod N over ordered pairs k != l.
// Throws InvalidInput on duplicates, out-of-range residues or N < 2.
VerificationReport verify_difference_set(int N, std::span<const int> subset);

class DifferenceSet {
public:
    // Verifies `elements`; throws InvalidInput unless they form a difference
    // set with lambda >= 1. Elements are stored sorted.
    static DifferenceSet make(int N, std::vector<int> elements);

    int modulus() const noexcept { return params_.N; }
    int size() const noexcept { return params_.K; }
    const Params& params() const noexcept { return params_; }
    std::span<const int> elements() const noexcept { return elements_; }
    bool contains(int residue) const;

    // {e + t mod N}
    DifferenceSet translated(int t) const;

    // "N K lambda : e1,e2,...,eK"
    std::string to_catalog_line() const;

    friend bool operator==(const DifferenceSet&, const DifferenceSet&) = default;

private:
    DifferenceSet(Params p, std::vector<int> elements)
        : params_(p), elements_(std::move(elements)) {}

    Params params_;
    std::vector<int> elements_;
};

bool is_prime(long n);

// Nonzero quadratic residues modulo a prime q = 3 mod 4, q >= 7 (q = 3 gives lambda = 0).
// Throws UnsupportedParameters otherwise.
DifferenceSet quadratic_residue_set(int q);

enum class SearchStatus { found, proven_nonexistent, budget_exhausted };

std::string_view to_string(SearchStatus s);

struct SearchOutcome {
    SearchStatus status = SearchStatus::proven_nonexistent;
    std::optional<DifferenceSet> set;
    std::uint64_t nodes = 0;
};

// Deterministic lexicographic backtracking over K-subsets of Z_N containing 0.
// The first set in lexicographic order is returned. Parameters violating the
// counting identity are reported nonexistent without exploring.
SearchOutcome exhaustive_search(const Params& params, std::uint64_t node_budget);

// Plain-text catalog, one set per line:  N K lambda : e1,e2,...,eK
// Blank lines and lines starting with '#' are ignored. Every entry is
// re-verified on load; any malformed or failing line raises CatalogError.
class Catalog {
public:
    Catalog() = default;

    static Catalog parse(std::string_view text);
    static Catalog load(const std::filesystem::path& path);
    // The catalog compiled into the library from data/catalog.txt.
    static const Catalog& builtin();

    std::optional<DifferenceSet> lookup(int N, int K) const;
    const std::vector<DifferenceSet>& entries() const noexcept { return entries_; }
    // Adds or replaces the entry with the same (N, K).
    void insert(DifferenceSet ds);
    std::string serialize() const;

private:
    std::vector<DifferenceSet> entries_;
};

// Lookup in the built-in catalog.
std::optional<DifferenceSet> catalog_lookup(int N, int K);

// chi_K / sqrt(K)
CVector normalized_generator(const DifferenceSet& ds);

// |DFT(chi_K)(j)| with the convention  g^(j) = sum_k g(k) exp(-2 pi i k j / N).
std::vector<double> dft_magnitudes(const DifferenceSet& ds);

}  // namespace dsf::diffset
