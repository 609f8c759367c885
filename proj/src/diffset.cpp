#include "dsf/diffset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "dsf/error.hpp"

namespace dsf::diffset {

extern const char* const kBuiltinCatalogText;

namespace {

int mod(long a, int n) {
    long r = a % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_int(std::string_view s, int& out) {
    s = trim(s);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

bool Params::valid() const noexcept {
    if (N < 2 || K < 1 || K > N || lambda < 1 || lambda > K) return false;
    return static_cast<long>(K) * (K - 1) == static_cast<long>(lambda) * (N - 1);
}

std::string to_string(const Params& p) {
    return "(" + std::to_string(p.N) + "," + std::to_string(p.K) + "," + std::to_string(p.lambda) + ")";
}

std::optional<Params> derive_params(int N, int K) {
    if (N < 2 || K < 1 || K > N) return std::nullopt;
    const long num = static_cast<long>(K) * (K - 1);
    if (num == 0 || num % (N - 1) != 0) return std::nullopt;
    const long lambda = num / (N - 1);
    if (lambda > K) return std::nullopt;
    return Params{N, K, static_cast<int>(lambda)};
}

VerificationReport verify_difference_set(int N, std::span<const int> subset) {
    if (N < 2) throw InvalidInput("modulus must be at least 2, got " + std::to_string(N));
    std::vector<char> seen(static_cast<std::size_t>(N), 0);
    for (int e : subset) {
        if (e < 0 || e >= N)
            throw InvalidInput("residue " + std::to_string(e) + " outside {0,...," + std::to_string(N - 1) + "}");
        if (seen[static_cast<std::size_t>(e)]) throw InvalidInput("duplicate element " + std::to_string(e));
        seen[static_cast<std::size_t>(e)] = 1;
    }

    std::vector<int> counts(static_cast<std::size_t>(N), 0);
    for (int a : subset)
        for (int b : subset)
            if (a != b) ++counts[static_cast<std::size_t>(mod(a - b, N))];

    VerificationReport report;
    for (int d = 1; d < N; ++d) report.difference_counts.emplace(d, counts[static_cast<std::size_t>(d)]);

    const int first = counts[1];
    const bool uniform = std::all_of(counts.begin() + 1, counts.end(), [first](int c) { return c == first; });
    if (uniform) {
        report.inferred_lambda = first;
        report.is_difference_set = first >= 1;
    }
    if (report.is_difference_set) {
        const auto derived = derive_params(N, static_cast<int>(subset.size()));
        report.params_consistent = derived && derived->lambda == *report.inferred_lambda;
    }
    return report;
}

DifferenceSet DifferenceSet::make(int N, std::vector<int> elements) {
    const auto report = verify_difference_set(N, elements);
    if (!report.is_difference_set)
        throw InvalidInput("elements do not form a difference set modulo " + std::to_string(N));
    Params p{N, static_cast<int>(elements.size()), *report.inferred_lambda};
    if (!p.valid()) throw InvalidInput("difference set violates parameter identity " + to_string(p));
    std::sort(elements.begin(), elements.end());
    return DifferenceSet(p, std::move(elements));
}

bool DifferenceSet::contains(int residue) const {
    return std::binary_search(elements_.begin(), elements_.end(), mod(residue, params_.N));
}

DifferenceSet DifferenceSet::translated(int t) const {
    std::vector<int> shifted;
    shifted.reserve(elements_.size());
    for (int e : elements_) shifted.push_back(mod(static_cast<long>(e) + t, params_.N));
    std::sort(shifted.begin(), shifted.end());
    return DifferenceSet(params_, std::move(shifted));
}

std::string DifferenceSet::to_catalog_line() const {
    std::string line = std::to_string(params_.N) + " " + std::to_string(params_.K) + " " +
                       std::to_string(params_.lambda) + " : ";
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (i) line += ',';
        line += std::to_string(elements_[i]);
    }
    return line;
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

DifferenceSet quadratic_residue_set(int q) {
    if (q < 7 || !is_prime(q) || q % 4 != 3)
        throw UnsupportedParameters("quadratic residue difference sets need a prime q = 3 mod 4, q >= 7, got " +
                                    std::to_string(q));
    std::vector<char> residue(static_cast<std::size_t>(q), 0);
    for (long x = 1; x < q; ++x) residue[static_cast<std::size_t>(x * x % q)] = 1;
    std::vector<int> elements;
    for (int r = 1; r < q; ++r)
        if (residue[static_cast<std::size_t>(r)]) elements.push_back(r);
    return DifferenceSet::make(q, std::move(elements));
}

std::string_view to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::found: return "found";
        case SearchStatus::proven_nonexistent: return "proven_nonexistent";
        case SearchStatus::budget_exhausted: return "budget_exhausted";
    }
    return "unknown";
}

namespace {

class Backtracker {
public:
    Backtracker(const Params& p, std::uint64_t budget)
        : N_(p.N), K_(p.K), lambda_(p.lambda), budget_(budget), counts_(static_cast<std::size_t>(p.N), 0) {
        chosen_.reserve(static_cast<std::size_t>(p.K));
    }

    SearchOutcome run() {
        SearchOutcome out;
        chosen_.push_back(0);
        const bool found = extend(1);
        out.nodes = nodes_;
        if (found) {
            out.status = SearchStatus::found;
            out.set = DifferenceSet::make(N_, chosen_);
        } else {
            out.status = aborted_ ? SearchStatus::budget_exhausted : SearchStatus::proven_nonexistent;
        }
        return out;
    }

private:
    // Adds x and reports whether every difference count stays <= lambda.
    // On failure the partial increments are rolled back.
    bool push(int x) {
        std::size_t done = 0;
        bool ok = true;
        for (; done < chosen_.size(); ++done) {
            const int e = chosen_[done];
            int& c1 = counts_[static_cast<std::size_t>(mod(x - e, N_))];
            int& c2 = counts_[static_cast<std::size_t>(mod(e - x, N_))];
            ++c1;
            ++c2;
            if (c1 > lambda_ || c2 > lambda_) {
                ++done;
                ok = false;
                break;
            }
        }
        if (!ok) {
            unwind(x, done);
            return false;
        }
        chosen_.push_back(x);
        return true;
    }

    void unwind(int x, std::size_t upto) {
        for (std::size_t i = 0; i < upto; ++i) {
            const int e = chosen_[i];
            --counts_[static_cast<std::size_t>(mod(x - e, N_))];
            --counts_[static_cast<std::size_t>(mod(e - x, N_))];
        }
    }

    void pop() {
        const int x = chosen_.back();
        chosen_.pop_back();
        unwind(x, chosen_.size());
    }

    bool extend(int next) {
        if (static_cast<int>(chosen_.size()) == K_) return true;
        const int remaining = K_ - static_cast<int>(chosen_.size());
        for (int x = next; x <= N_ - remaining; ++x) {
            if (++nodes_ > budget_) {
                aborted_ = true;
                return false;
            }
            if (!push(x)) continue;
            if (extend(x + 1)) return true;
            pop();
            if (aborted_) return false;
        }
        return false;
    }

    int N_, K_, lambda_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
    std::vector<int> counts_;
    std::vector<int> chosen_;
};

}  // namespace

SearchOutcome exhaustive_search(const Params& params, std::uint64_t node_budget) {
    if (!params.valid()) return SearchOutcome{SearchStatus::proven_nonexistent, std::nullopt, 0};
    // Once every count is <= lambda and K(K-1) = lambda(N-1) differences are
    // placed, all counts equal lambda, so a full K-subset is a solution.
    return Backtracker(params, node_budget).run();
}

Catalog Catalog::parse(std::string_view text) {
    Catalog cat;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = trim(text.substr(0, eol));
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (line.empty() || line.front() == '#') continue;

        const auto where = "catalog line " + std::to_string(line_no) + ": ";
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) throw CatalogError(where + "missing ':'");

        std::istringstream head{std::string(line.substr(0, colon))};
        Params declared;
        std::string extra;
        if (!(head >> declared.N >> declared.K >> declared.lambda) || (head >> extra))
            throw CatalogError(where + "expected 'N K lambda'");

        std::vector<int> elements;
        std::string_view rest = line.substr(colon + 1);
        while (true) {
            const auto comma = rest.find(',');
            int v = 0;
            if (!parse_int(rest.substr(0, comma), v)) throw CatalogError(where + "bad element list");
            elements.push_back(v);
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        if (static_cast<int>(elements.size()) != declared.K)
            throw CatalogError(where + "expected " + std::to_string(declared.K) + " elements");

        try {
            auto ds = DifferenceSet::make(declared.N, std::move(elements));
            if (ds.params() != declared)
                throw CatalogError(where + "declared " + to_string(declared) + " but verified " +
                                   to_string(ds.params()));
            cat.insert(std::move(ds));
        } catch (const InvalidInput& e) {
            throw CatalogError(where + e.what());
        }
    }
    return cat;
}

Catalog Catalog::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CatalogError("cannot open catalog " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

const Catalog& Catalog::builtin() {
    static const Catalog cat = parse(kBuiltinCatalogText);
    return cat;
}

std::optional<DifferenceSet> Catalog::lookup(int N, int K) const {
    for (const auto& ds : entries_)
        if (ds.modulus() == N && ds.size() == K) return ds;
    return std::nullopt;
}

void Catalog::insert(DifferenceSet ds) {
    auto same = [&](const DifferenceSet& e) { return e.modulus() == ds.modulus() && e.size() == ds.size(); };
    if (auto it = std::find_if(entries_.begin(), entries_.end(), same); it != entries_.end()) {
        *it = std::move(ds);
        return;
    }
    entries_.push_back(std::move(ds));
}

std::string Catalog::serialize() const {
    std::string out = "# N K lambda : elements\n";
    for (const auto& ds : entries_) out += ds.to_catalog_line() + "\n";
    return out;
}

std::optional<DifferenceSet> catalog_lookup(int N, int K) {
    return Catalog::builtin().lookup(N, K);
}

CVector normalized_generator(const DifferenceSet& ds) {
    CVector v = CVector::Zero(ds.modulus());
    const double amp = 1.0 / std::sqrt(static_cast<double>(ds.size()));
    for (int e : ds.elements()) v(e) = amp;
    return v;
}

std::vector<double> dft_magnitudes(const DifferenceSet& ds) {
    std::vector<Complex> chi(static_cast<std::size_t>(ds.modulus()), 0.0);
    for (int e : ds.elements()) chi[static_cast<std::size_t>(e)] = 1.0;
    std::vector<Complex> spectrum;
    Eigen::FFT<double> fft;
    fft.fwd(spectrum, chi);
    std::vector<double> mags(spectrum.size());
    std::transform(spectrum.begin(), spectrum.end(), mags.begin(), [](Complex c) { return std::abs(c); });
    return mags;
}

}  // namespace dsf::diffset
