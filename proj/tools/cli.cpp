#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dsf/diffset.hpp"
#include "dsf/error.hpp"
#include "dsf/experiments.hpp"
#include "dsf/fusion.hpp"
#include "dsf/gabor.hpp"
#include "dsf/matrix_io.hpp"
#include "dsf/solvers.hpp"

#ifndef DSF_VERSION
#define DSF_VERSION "unknown"
#endif

namespace dsf::cli {

using json = nlohmann::json;

namespace {

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(cell, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != cell.size()) throw InvalidInput(what + ": '" + cell + "' is not an integer");
        out.push_back(v);
    }
    if (out.empty()) throw InvalidInput(what + " is empty");
    return out;
}

std::pair<int, int> parse_pair(const std::string& text, const std::string& what) {
    const auto v = parse_int_list(text, what);
    if (v.size() != 2) throw InvalidInput(what + " must be 'N,K'");
    return {v[0], v[1]};
}

diffset::DifferenceSet lookup_or_throw(int N, int K) {
    if (auto ds = diffset::catalog_lookup(N, K)) return *ds;
    // Quadratic residue sets are constructed rather than stored.
    if (diffset::is_prime(N) && N % 4 == 3 && 2 * K == N - 1) return diffset::quadratic_residue_set(N);
    throw InvalidInput("no (" + std::to_string(N) + "," + std::to_string(K) + ") difference set available");
}

json params_json(const diffset::Params& p) { return {{"N", p.N}, {"K", p.K}, {"lambda", p.lambda}}; }

json set_json(const diffset::DifferenceSet& ds) {
    return {{"params", params_json(ds.params())},
            {"elements", std::vector<int>(ds.elements().begin(), ds.elements().end())}};
}

json envelope(const std::string& command, json config) {
    return {{"version", DSF_VERSION}, {"command", command}, {"config", std::move(config)}};
}

json curves_json(const std::vector<experiments::RecoveryCurve>& curves) {
    json arr = json::array();
    for (const auto& c : curves) {
        json pts = json::array();
        for (const auto& p : c.points)
            pts.push_back({{"x", p.x}, {"successes", p.successes}, {"trials", p.trials}, {"rate", p.rate()}});
        arr.push_back({{"experiment", c.experiment}, {"label", c.label}, {"points", pts}});
    }
    return arr;
}

solvers::SolverConfig solver_config(double rho, int iters, double tol) {
    solvers::SolverConfig cfg;
    cfg.rho = rho;
    cfg.max_iters = iters;
    cfg.tol_primal = tol;
    cfg.tol_dual = tol;
    cfg.validate();
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << text;
    if (!f) throw IoError("write to " + path + " failed");
}

struct Options {
    // diffset
    int verify_n = 0;
    std::string verify_subset;
    std::string search_params;
    std::string search_set;
    std::uint64_t budget = 50'000'000;
    std::string catalog_file;
    std::string catalog_set;
    // gabor
    std::string coh_set;
    int coh_alltop = 0;
    int coh_random = 0;
    std::uint64_t seed = 0;
    bool fast = false;
    std::string table_quadratic = "11,19,23,43";
    std::string table_quartic = "37,101";
    std::string table_singer = "2:2,3:2,4:2,2:3,3:3";
    int max_brute_n = 64;
    bool table_csv = false;
    // fusion
    std::string fusion_set;
    bool distances_json = false;
    std::string out_path;
    // solve
    std::string matrix_path;
    std::string y_path;
    int block_size = 1;
    double rho = 1.0;
    int max_iters = 5000;
    double tol = 1e-9;
    // experiment
    int exp_n = 0;
    std::string exp_set;
    int trials = 50;
    int kmin = 1;
    int kmax = 0;
    std::string sparsities;
    std::string generators = "alltop,random_torus,difference_set";
    std::string measurements;
    bool real_signal = false;
    bool complex_coefficients = false;
    unsigned threads = 0;
};

struct Runner {
    Options& o;
    std::ostream& out;
    std::ostream& err;

    int diffset_verify() {
        const auto subset = parse_int_list(o.verify_subset, "subset");
        const auto rep = diffset::verify_difference_set(o.verify_n, subset);
        json counts = json::object();
        for (auto [d, c] : rep.difference_counts) counts[std::to_string(d)] = c;
        json j = envelope("diffset verify", {{"N", o.verify_n}, {"subset", subset}});
        j["is_difference_set"] = rep.is_difference_set;
        j["lambda"] = rep.inferred_lambda ? json(*rep.inferred_lambda) : json(nullptr);
        j["params_consistent"] = rep.params_consistent;
        j["difference_counts"] = counts;
        out << j.dump(2) << "\n";
        return kOk;
    }

    int diffset_search() {
        diffset::Params p;
        if (!o.search_params.empty()) {
            const auto v = parse_int_list(o.search_params, "--params");
            if (v.size() != 3) throw InvalidInput("--params must be 'N,K,lambda'");
            p = {v[0], v[1], v[2]};
        } else if (!o.search_set.empty()) {
            const auto [N, K] = parse_pair(o.search_set, "--set");
            if (auto d = diffset::derive_params(N, K))
                p = *d;
            else
                p = {N, K, 0};
        } else {
            throw InvalidInput("diffset search needs --params or --set");
        }
        const auto res = diffset::exhaustive_search(p, o.budget);
        json j = envelope("diffset search", {{"N", p.N}, {"K", p.K}, {"lambda", p.lambda}, {"budget", o.budget}});
        j["status"] = std::string(diffset::to_string(res.status));
        j["nodes"] = res.nodes;
        if (res.set) {
            j["set"] = set_json(*res.set);
            j["catalog_line"] = res.set->to_catalog_line();
        }
        out << j.dump(2) << "\n";
        return kOk;
    }

    int diffset_catalog() {
        const diffset::Catalog cat =
            o.catalog_file.empty() ? diffset::Catalog::builtin() : diffset::Catalog::load(o.catalog_file);
        json j = envelope("diffset catalog", {{"file", o.catalog_file.empty() ? "builtin" : o.catalog_file},
                                              {"set", o.catalog_set}});
        if (!o.catalog_set.empty()) {
            const auto [N, K] = parse_pair(o.catalog_set, "--set");
            const auto ds = cat.lookup(N, K);
            j["found"] = ds.has_value();
            j["derived_params"] = diffset::derive_params(N, K) ? params_json(*diffset::derive_params(N, K))
                                                              : json(nullptr);
            if (ds) j["set"] = set_json(*ds);
        } else {
            json entries = json::array();
            for (const auto& ds : cat.entries()) entries.push_back(set_json(ds));
            j["entries"] = entries;
        }
        out << j.dump(2) << "\n";
        return kOk;
    }

    int gabor_coherence() {
        const int chosen = (!o.coh_set.empty()) + (o.coh_alltop != 0) + (o.coh_random != 0);
        if (chosen != 1) throw InvalidInput("choose exactly one of --set, --alltop, --random");
        json cfg;
        std::optional<gabor::Generator> g;
        if (!o.coh_set.empty()) {
            const auto [N, K] = parse_pair(o.coh_set, "--set");
            g = gabor::Generator::from_difference_set(lookup_or_throw(N, K));
            cfg = {{"generator", "difference_set"}, {"N", N}, {"K", K}};
        } else if (o.coh_alltop) {
            g = gabor::alltop_generator(o.coh_alltop);
            cfg = {{"generator", "alltop"}, {"N", o.coh_alltop}};
        } else {
            g = gabor::random_torus_generator(o.coh_random, o.seed);
            cfg = {{"generator", "random_torus"}, {"N", o.coh_random}, {"seed", o.seed}};
        }
        cfg["fast"] = o.fast;
        json j = envelope("gabor coherence", cfg);
        const int N = g->dimension();
        if (o.fast) {
            j["mu"] = gabor::fast_mutual_coherence(*g);
            j["welch"] = gabor::welch_bound(static_cast<std::size_t>(N) * N, static_cast<std::size_t>(N));
            if (g->params()) j["predicted"] = gabor::predicted_coherence(*g->params());
        } else {
            const gabor::GaborFrame frame(*g);
            const auto rep = gabor::mutual_coherence(frame);
            j["mu"] = rep.mutual_coherence;
            j["argmax_pair"] = {rep.argmax_pair.first, rep.argmax_pair.second};
            j["diagonal_block_offdiag_value"] = rep.diagonal_block_offdiag_value;
            j["offdiag_block_max"] = rep.offdiag_block_max;
            j["welch"] = rep.welch_bound;
            j["tightness_error"] = frame.tightness_error();
            if (rep.predicted) j["predicted"] = *rep.predicted;
        }
        if (j.contains("predicted"))
            j["predicted_matches"] = std::abs(j["predicted"].get<double>() - j["mu"].get<double>()) < 1e-10;
        out << j.dump(2) << "\n";
        return kOk;
    }

    int gabor_table() {
        struct Row {
            std::string family;
            diffset::Params params;
            double table_mu2;
            double welch2;
            std::optional<diffset::DifferenceSet> set;
        };
        std::vector<Row> rows;
        if (!o.table_singer.empty()) {
            std::stringstream in(o.table_singer);
            std::string cell;
            while (std::getline(in, cell, ',')) {
                const auto colon = cell.find(':');
                if (colon == std::string::npos) throw InvalidInput("--singer entries must be q:d");
                const int q = std::stoi(cell.substr(0, colon));
                const int d = std::stoi(cell.substr(colon + 1));
                if (q < 2 || d < 2) throw InvalidInput("Singer parameters need q >= 2 and d >= 2");
                const double qd = std::pow(q, d);
                const int N = static_cast<int>((std::pow(q, d + 1) - 1) / (q - 1));
                const int K = static_cast<int>((qd - 1) / (q - 1));
                const int lambda = static_cast<int>((std::pow(q, d - 1) - 1) / (q - 1));
                const double mu2 = d == 2 ? static_cast<double>(q) / ((q + 1.0) * (q + 1.0))
                                          : (qd - q) * (qd - q) / (q * q * (qd - 1) * (qd - 1));
                const double w2 = d == 2 ? 1.0 / (q * q + q + 2.0) : (q - 1.0) / (q * qd + q - 2.0);
                rows.push_back({"Singer, d=" + std::to_string(d), {N, K, lambda}, mu2, w2, diffset::catalog_lookup(N, K)});
            }
        }
        if (!o.table_quadratic.empty())
            for (int q : parse_int_list(o.table_quadratic, "--quadratic")) {
                const double mu2 = (q - 3.0) * (q - 3.0) / (4.0 * (q - 1.0) * (q - 1.0));
                const auto ds = diffset::quadratic_residue_set(q);
                rows.push_back({"Quadratic", ds.params(), mu2, 1.0 / (q + 1.0), ds});
            }
        if (!o.table_quartic.empty())
            for (int p : parse_int_list(o.table_quartic, "--quartic")) {
                if (p < 5 || (p - 5) % 16 != 0) throw InvalidInput("quartic parameters need p = 5 mod 16");
                const double mu2 = p < 57 ? (3.0 * p + 1.0) / ((p - 1.0) * (p - 1.0))
                                          : (p - 5.0) * (p - 5.0) / (16.0 * (p - 1.0) * (p - 1.0));
                rows.push_back({p < 57 ? "Quartic, p<57" : "Quartic, p>57", {p, (p - 1) / 4, (p - 5) / 16}, mu2,
                                1.0 / (p + 1.0), diffset::catalog_lookup(p, (p - 1) / 4)});
            }

        json arr = json::array();
        std::string csv = "family,N,K,lambda,table_mu2,closed_form_mu2,measured_mu2,welch2\n";
        for (const auto& r : rows) {
            const double closed = gabor::predicted_coherence(r.params);
            json row = {{"family", r.family},
                        {"params", params_json(r.params)},
                        {"table_mu2", r.table_mu2},
                        {"closed_form_mu2", closed * closed},
                        {"welch2", r.welch2},
                        {"measured_mu2", nullptr},
                        {"method", nullptr}};
            if (r.set) {
                const auto g = gabor::Generator::from_difference_set(*r.set);
                double mu = 0.0;
                if (r.params.N <= o.max_brute_n) {
                    mu = gabor::mutual_coherence(gabor::GaborFrame(g)).mutual_coherence;
                    row["method"] = "brute_force";
                } else {
                    mu = gabor::fast_mutual_coherence(g);
                    row["method"] = "dft";
                }
                row["measured_mu2"] = mu * mu;
            }
            char line[256];
            std::snprintf(line, sizeof line, "%s,%d,%d,%d,%.15g,%.15g,%s,%.15g\n", r.family.c_str(), r.params.N,
                          r.params.K, r.params.lambda, r.table_mu2, closed * closed,
                          row["measured_mu2"].is_null() ? ""
                                                        : std::to_string(row["measured_mu2"].get<double>()).c_str(),
                          r.welch2);
            csv += line;
            arr.push_back(row);
        }
        if (o.table_csv) {
            out << csv;
        } else {
            json j = envelope("gabor table", {{"singer", o.table_singer},
                                              {"quadratic", o.table_quadratic},
                                              {"quartic", o.table_quartic},
                                              {"max_brute_n", o.max_brute_n}});
            j["rows"] = arr;
            out << j.dump(2) << "\n";
        }
        return kOk;
    }

    int fusion_report() {
        const auto [N, K] = parse_pair(o.fusion_set, "--set");
        const auto ds = lookup_or_throw(N, K);
        const auto ff = fusion::build_fusion_frame(ds);
        const auto rep = fusion::fusion_report(ff);
        const auto bounds = fusion::fusion_frame_bounds(ff);
        bool all_unit = true;
        for (std::size_t a = 0; a < ff.size(); ++a)
            for (std::size_t b = a + 1; b < ff.size(); ++b)
                all_unit = all_unit && fusion::projection_product_norm(ff, a, b) == 1.0;

        json j = envelope("fusion report", {{"N", N}, {"K", K}});
        j["set"] = set_json(ds);
        j["tight"] = rep.tight;
        j["tight_bound"] = rep.tight_bound;
        j["frame_bounds"] = {bounds.lower, bounds.upper};
        j["equidistant"] = rep.equidistant;
        j["distance_squared"] = rep.distance_squared ? json(*rep.distance_squared) : json(nullptr);
        j["simplex_bound"] = rep.simplex_bound;
        j["sparsity"] = rep.sparsity;
        j["optimal_packing"] = rep.optimal_packing;
        j["projection_products_all_unit"] = all_unit;
        out << j.dump(2) << "\n";
        return kOk;
    }

    int fusion_distances() {
        const auto [N, K] = parse_pair(o.fusion_set, "--set");
        const auto ff = fusion::build_fusion_frame(lookup_or_throw(N, K));
        const auto d = fusion::pairwise_distance_squared(ff);
        std::string text;
        if (o.distances_json) {
            json j = envelope("fusion distances", {{"N", N}, {"K", K}});
            j["distance_squared"] = d;
            text = j.dump(2) + "\n";
        } else {
            text = "a,b,distance_squared\n";
            for (std::size_t a = 0; a < d.size(); ++a)
                for (std::size_t b = a + 1; b < d.size(); ++b)
                    text += std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(d[a][b]) + "\n";
        }
        if (o.out_path.empty())
            out << text;
        else
            write_text(o.out_path, text);
        return kOk;
    }

    int solve(bool block) {
        const CMatrix A = io::read_matrix(o.matrix_path);
        const CMatrix ym = io::read_matrix(o.y_path);
        if (ym.cols() != 1) throw InvalidInput("--y must hold a single column");
        const CVector y = ym.col(0);
        const auto cfg = solver_config(o.rho, o.max_iters, o.tol);

        json config = {{"matrix", o.matrix_path}, {"y", o.y_path},     {"rho", cfg.rho},
                       {"max_iters", cfg.max_iters}, {"tol", cfg.tol_primal}};
        solvers::SolveResult res;
        double objective = 0.0;
        if (block) {
            if (o.block_size < 1 || A.cols() % o.block_size != 0)
                throw InvalidInput("--block-size must divide the number of columns");
            const solvers::BlockStructure blocks(static_cast<std::size_t>(A.cols() / o.block_size),
                                                 static_cast<std::size_t>(o.block_size));
            config["block_size"] = o.block_size;
            res = solvers::block_basis_pursuit(A, y, blocks, cfg);
            objective = solvers::mixed_norm(res.solution, blocks);
        } else {
            res = solvers::basis_pursuit(A, y, cfg);
            objective = solvers::l1_norm(res.solution);
        }

        json j = envelope(block ? "solve block-bp" : "solve bp", config);
        j["status"] = std::string(solvers::to_string(res.status));
        j["iterations"] = res.iterations;
        j["primal_residual"] = res.primal_residual;
        j["dual_residual"] = res.dual_residual;
        j["objective"] = objective;
        j["feasibility_residual"] = (A * res.solution - y).norm();
        json sol = json::array();
        for (Eigen::Index i = 0; i < res.solution.size(); ++i)
            sol.push_back({res.solution(i).real(), res.solution(i).imag()});
        j["solution"] = sol;
        if (!o.out_path.empty()) io::write_matrix(res.solution, o.out_path);
        out << j.dump(2) << "\n";
        if (!res.converged()) {
            err << "warning: solver stopped after " << res.iterations << " iterations without converging\n";
            return kNotConverged;
        }
        return kOk;
    }

    std::vector<int> sparsity_grid(int upper) const {
        if (!o.sparsities.empty()) return parse_int_list(o.sparsities, "--sparsities");
        const int kmax = o.kmax > 0 ? o.kmax : upper;
        if (o.kmin < 1 || kmax < o.kmin) throw InvalidInput("need 1 <= kmin <= kmax");
        std::vector<int> grid;
        for (int k = o.kmin; k <= kmax; ++k) grid.push_back(k);
        return grid;
    }

    void finish_experiment(const std::string& command, json config,
                           const std::vector<experiments::RecoveryCurve>& curves) {
        if (!o.out_path.empty()) experiments::emit_curves(curves, o.out_path);
        json j = envelope(command, std::move(config));
        j["curves"] = curves_json(curves);
        j["out"] = o.out_path;
        out << j.dump(2) << "\n";
    }

    int experiment_classic() {
        experiments::ClassicExperimentConfig cfg;
        int K = 0;
        int N = o.exp_n;
        if (!o.exp_set.empty()) {
            const auto [sN, sK] = parse_pair(o.exp_set, "--set");
            if (N != 0 && N != sN) throw InvalidInput("--n and --set disagree on N");
            N = sN;
            K = sK;
        }
        if (N == 0) throw InvalidInput("experiment classic needs --n or --set");
        cfg.N = N;
        cfg.K = K;
        cfg.generators.clear();
        std::stringstream in(o.generators);
        std::string name;
        while (std::getline(in, name, ',')) {
            const auto kind = gabor::parse_generator_kind(name);
            if (!kind) throw InvalidInput("unknown generator '" + name + "'");
            cfg.generators.push_back(*kind);
        }
        if (K == 0 && std::count(cfg.generators.begin(), cfg.generators.end(), gabor::GeneratorKind::difference_set))
            throw InvalidInput("difference_set generator needs --set N,K");
        cfg.sparsities = sparsity_grid(N);
        cfg.trials = o.trials;
        cfg.seed = o.seed;
        cfg.threads = o.threads;
        cfg.solver = solver_config(o.rho, o.max_iters, o.tol);

        const auto curves = experiments::run_classic_experiment(cfg);
        for (const auto& c : curves)
            for (const auto& w : experiments::decreasing_violations(c, 2.0 / std::sqrt(cfg.trials)))
                err << "warning: non-monotone curve: " << w << "\n";
        finish_experiment("experiment classic",
                          {{"N", cfg.N},
                           {"K", cfg.K},
                           {"generators", o.generators},
                           {"sparsities", cfg.sparsities},
                           {"trials", cfg.trials},
                           {"seed", cfg.seed},
                           {"threshold", cfg.threshold},
                           {"rho", cfg.solver.rho},
                           {"max_iters", cfg.solver.max_iters},
                           {"tol", cfg.solver.tol_primal}},
                          curves);
        return kOk;
    }

    int experiment_fusion() {
        experiments::FusionExperimentConfig cfg;
        const auto [N, K] = parse_pair(o.exp_set, "--set");
        cfg.N = N;
        cfg.K = K;
        cfg.measurements = parse_int_list(o.measurements, "--measurements");
        cfg.sparsities = sparsity_grid(N);
        cfg.trials = o.trials;
        cfg.seed = o.seed;
        cfg.threads = o.threads;
        cfg.complex_signal = !o.real_signal;
        cfg.complex_coefficients = o.complex_coefficients;
        cfg.solver = solver_config(o.rho, o.max_iters, o.tol);

        const auto curves = experiments::run_fusion_experiment(cfg);
        for (const auto& w : experiments::ordering_violations(curves, 2.0 / std::sqrt(cfg.trials)))
            err << "warning: more measurements did worse: " << w << "\n";
        finish_experiment("experiment fusion",
                          {{"N", cfg.N},
                           {"K", cfg.K},
                           {"measurements", cfg.measurements},
                           {"sparsities", cfg.sparsities},
                           {"trials", cfg.trials},
                           {"seed", cfg.seed},
                           {"threshold", cfg.threshold},
                           {"complex_signal", cfg.complex_signal},
                           {"complex_coefficients", cfg.complex_coefficients},
                           {"rho", cfg.solver.rho},
                           {"max_iters", cfg.solver.max_iters},
                           {"tol", cfg.solver.tol_primal}},
                          curves);
        return kOk;
    }
};

void add_solver_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--rho", o.rho, "ADMM penalty")->capture_default_str();
    cmd->add_option("--max-iters", o.max_iters, "ADMM iteration limit")->capture_default_str();
    cmd->add_option("--tol", o.tol, "primal and dual tolerance")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Difference-set Gabor frames, fusion frames and sparse recovery", "dsframes"};
    app.set_version_flag("--version", DSF_VERSION);
    app.require_subcommand(1);

    auto* ds = app.add_subcommand("diffset", "construct and verify difference sets")->require_subcommand(1);
    auto* verify = ds->add_subcommand("verify", "count differences of a subset of Z_N");
    verify->add_option("N", o.verify_n, "modulus")->required();
    verify->add_option("subset", o.verify_subset, "comma-separated residues")->required();
    auto* search = ds->add_subcommand("search", "backtracking search for a difference set");
    search->add_option("--params", o.search_params, "N,K,lambda");
    search->add_option("--set", o.search_set, "N,K (lambda derived)");
    search->add_option("--budget", o.budget, "node limit")->capture_default_str();
    auto* catalog = ds->add_subcommand("catalog", "list or query the catalog");
    catalog->add_option("--set", o.catalog_set, "N,K to look up");
    catalog->add_option("--file", o.catalog_file, "catalog file instead of the built-in one");

    auto* gb = app.add_subcommand("gabor", "Gabor frame analytics")->require_subcommand(1);
    auto* coh = gb->add_subcommand("coherence", "mutual coherence report");
    coh->add_option("--set", o.coh_set, "N,K difference set generator");
    coh->add_option("--alltop", o.coh_alltop, "Alltop generator of prime dimension N");
    coh->add_option("--random", o.coh_random, "random torus generator of dimension N");
    coh->add_option("--seed", o.seed, "seed for --random")->capture_default_str();
    coh->add_flag("--fast", o.fast, "DFT-based coherence instead of the brute-force Gram scan");
    auto* table = gb->add_subcommand("table", "coherence table for difference set families");
    table->add_option("--singer", o.table_singer, "q:d list")->capture_default_str();
    table->add_option("--quadratic", o.table_quadratic, "primes q = 3 mod 4")->capture_default_str();
    table->add_option("--quartic", o.table_quartic, "primes p")->capture_default_str();
    table->add_option("--max-brute-n", o.max_brute_n, "largest N measured by brute force")->capture_default_str();
    table->add_flag("--csv", o.table_csv, "CSV instead of JSON");
    table->add_flag("--json", [&o](std::int64_t) { o.table_csv = false; }, "JSON output (default)");

    auto* fu = app.add_subcommand("fusion", "Gabor fusion frames")->require_subcommand(1);
    auto* report = fu->add_subcommand("report", "tightness, equidistance, packing and sparsity");
    report->add_option("--set", o.fusion_set, "N,K")->required();
    auto* dist = fu->add_subcommand("distances", "pairwise squared chordal distances");
    dist->add_option("--set", o.fusion_set, "N,K")->required();
    dist->add_option("--out", o.out_path, "output file (default stdout)");
    dist->add_flag("--json", o.distances_json, "JSON matrix instead of CSV");
    dist->add_flag("--csv", [&o](std::int64_t) { o.distances_json = false; }, "CSV output (default)");

    auto* sv = app.add_subcommand("solve", "convex recovery from CSV inputs")->require_subcommand(1);
    auto* bp = sv->add_subcommand("bp", "basis pursuit");
    auto* bbp = sv->add_subcommand("block-bp", "mixed l2/l1 minimization");
    for (auto* cmd : {bp, bbp}) {
        cmd->add_option("--matrix", o.matrix_path, "matrix CSV")->required();
        cmd->add_option("--y", o.y_path, "measurement CSV (one column)")->required();
        cmd->add_option("--out", o.out_path, "solution CSV");
        add_solver_flags(cmd, o);
    }
    bbp->add_option("--block-size", o.block_size, "coefficients per block")->required();

    auto* ex = app.add_subcommand("experiment", "Monte-Carlo recovery experiments")->require_subcommand(1);
    auto* classic = ex->add_subcommand("classic", "sparse recovery from Gabor measurements");
    classic->add_option("--n", o.exp_n, "dimension N");
    classic->add_option("--set", o.exp_set, "N,K difference set");
    classic->add_option("--generators", o.generators, "comma-separated generator kinds")->capture_default_str();
    auto* fexp = ex->add_subcommand("fusion", "fusion-sparse recovery");
    fexp->add_option("--set", o.exp_set, "N,K difference set")->required();
    fexp->add_option("--measurements", o.measurements, "comma-separated n values")->required();
    fexp->add_flag("--real-signal", o.real_signal, "real Gaussian block values");
    fexp->add_flag("--complex-coefficients", o.complex_coefficients, "complex Gaussian a_ij");
    for (auto* cmd : {classic, fexp}) {
        cmd->add_option("--trials", o.trials, "trials per point")->capture_default_str();
        cmd->add_option("--seed", o.seed, "master seed")->capture_default_str();
        cmd->add_option("--kmin", o.kmin, "smallest sparsity")->capture_default_str();
        cmd->add_option("--kmax", o.kmax, "largest sparsity (default N)");
        cmd->add_option("--sparsities", o.sparsities, "explicit comma-separated sparsity grid");
        cmd->add_option("--out", o.out_path, "curve CSV");
        cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
        add_solver_flags(cmd, o);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ConversionError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidParams;
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidParams;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    Runner r{o, out, err};
    try {
        if (*verify) return r.diffset_verify();
        if (*search) return r.diffset_search();
        if (*catalog) return r.diffset_catalog();
        if (*coh) return r.gabor_coherence();
        if (*table) return r.gabor_table();
        if (*report) return r.fusion_report();
        if (*dist) return r.fusion_distances();
        if (*bp) return r.solve(false);
        if (*bbp) return r.solve(true);
        if (*classic) return r.experiment_classic();
        if (*fexp) return r.experiment_fusion();
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidParams;
    } catch (const UnsupportedParameters& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidParams;
    } catch (const ConfigurationError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidParams;
    } catch (const CatalogError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidParams;
    } catch (const SolverError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidParams;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    err << "error: no subcommand selected\n";
    return kUsage;
}

}  // namespace dsf::cli
