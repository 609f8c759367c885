#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dsf/diffset.hpp"
#include "dsf/error.hpp"
#include "dsf/experiments.hpp"
#include "dsf/fusion.hpp"
#include "dsf/gabor.hpp"
#include "dsf/solvers.hpp"

namespace py = pybind11;
using namespace dsf;

namespace {

py::dict params_dict(const diffset::Params& p) {
    py::dict d;
    d["N"] = p.N;
    d["K"] = p.K;
    d["lambda"] = p.lambda;
    return d;
}

std::vector<int> elements(const diffset::DifferenceSet& ds) { return {ds.elements().begin(), ds.elements().end()}; }

diffset::DifferenceSet require_set(int N, int K) {
    if (auto ds = diffset::catalog_lookup(N, K)) return *ds;
    throw InvalidInput("no (" + std::to_string(N) + "," + std::to_string(K) + ") set in the catalog");
}

gabor::Generator make_generator(const std::string& kind, int N, int K, std::uint64_t seed) {
    const auto k = gabor::parse_generator_kind(kind);
    if (!k) throw InvalidInput("unknown generator '" + kind + "'");
    switch (*k) {
        case gabor::GeneratorKind::alltop: return gabor::alltop_generator(N);
        case gabor::GeneratorKind::random_torus: return gabor::random_torus_generator(N, seed);
        case gabor::GeneratorKind::difference_set: return gabor::Generator::from_difference_set(require_set(N, K));
        default: throw InvalidInput("generator '" + kind + "' needs explicit values");
    }
}

py::dict solve_dict(const solvers::SolveResult& r) {
    py::dict d;
    d["solution"] = r.solution;
    d["iterations"] = r.iterations;
    d["primal_residual"] = r.primal_residual;
    d["dual_residual"] = r.dual_residual;
    d["status"] = std::string(solvers::to_string(r.status));
    d["residual_history"] = r.residual_history;
    return d;
}

py::list curves_list(const std::vector<experiments::RecoveryCurve>& curves) {
    py::list out;
    for (const auto& c : curves) {
        py::list pts;
        for (const auto& p : c.points) pts.append(py::make_tuple(p.x, p.successes, p.trials, p.rate()));
        py::dict d;
        d["experiment"] = c.experiment;
        d["label"] = c.label;
        d["points"] = pts;
        out.append(d);
    }
    return out;
}

solvers::SolverConfig solver_config(double rho, int max_iters, double tol) {
    solvers::SolverConfig c;
    c.rho = rho;
    c.max_iters = max_iters;
    c.tol_primal = tol;
    c.tol_dual = tol;
    return c;
}

}  // namespace

PYBIND11_MODULE(_dsframes, m) {
    m.doc() = "Difference-set Gabor frames, Gabor fusion frames and sparse recovery";

    py::register_exception<Error>(m, "Error", PyExc_ValueError);

    m.def(
        "verify_difference_set",
        [](int N, const std::vector<int>& subset) {
            const auto r = diffset::verify_difference_set(N, subset);
            py::dict d;
            d["is_difference_set"] = r.is_difference_set;
            d["lambda"] = r.inferred_lambda ? py::cast(*r.inferred_lambda) : py::none();
            d["params_consistent"] = r.params_consistent;
            d["difference_counts"] = r.difference_counts;
            return d;
        },
        py::arg("N"), py::arg("subset"));
    m.def(
        "derive_params",
        [](int N, int K) -> py::object {
            if (auto p = diffset::derive_params(N, K)) return params_dict(*p);
            return py::none();
        },
        py::arg("N"), py::arg("K"));
    m.def(
        "catalog_lookup",
        [](int N, int K) -> py::object {
            if (auto ds = diffset::catalog_lookup(N, K)) return py::cast(elements(*ds));
            return py::none();
        },
        py::arg("N"), py::arg("K"));
    m.def("catalog", [] {
        py::list out;
        for (const auto& ds : diffset::Catalog::builtin().entries())
            out.append(py::make_tuple(params_dict(ds.params()), elements(ds)));
        return out;
    });
    m.def(
        "quadratic_residue_set", [](int q) { return elements(diffset::quadratic_residue_set(q)); }, py::arg("q"));
    m.def(
        "search_difference_set",
        [](int N, int K, int lambda, std::uint64_t budget) {
            const auto r = diffset::exhaustive_search({N, K, lambda}, budget);
            py::dict d;
            d["status"] = std::string(diffset::to_string(r.status));
            d["nodes"] = r.nodes;
            d["set"] = r.set ? py::cast(elements(*r.set)) : py::none();
            return d;
        },
        py::arg("N"), py::arg("K"), py::arg("lambda_"), py::arg("budget") = 50'000'000);

    m.def(
        "generator",
        [](const std::string& kind, int N, int K, std::uint64_t seed) {
            return CVector(make_generator(kind, N, K, seed).values());
        },
        py::arg("kind"), py::arg("N"), py::arg("K") = 0, py::arg("seed") = 0);
    m.def(
        "gabor_frame", [](const CVector& g) { return CMatrix(gabor::GaborFrame(gabor::Generator(g)).columns()); },
        py::arg("g"), "N x N^2 matrix with column k*N + j equal to M_j T_k g.");
    m.def(
        "mutual_coherence",
        [](const CVector& g, bool fast) {
            const gabor::Generator gen(g);
            return fast ? gabor::fast_mutual_coherence(gen) : gabor::mutual_coherence(gabor::GaborFrame(gen)).mutual_coherence;
        },
        py::arg("g"), py::arg("fast") = false);
    m.def(
        "predicted_coherence", [](int N, int K, int lambda) { return gabor::predicted_coherence({N, K, lambda}); },
        py::arg("N"), py::arg("K"), py::arg("lambda_"));
    m.def("welch_bound", &gabor::welch_bound, py::arg("vectors"), py::arg("dimension"));
    m.def(
        "is_etf",
        [](const CMatrix& vectors, double tol) { return gabor::is_etf(vectors, tol).is_etf; },
        py::arg("vectors"), py::arg("tol") = 1e-10);

    m.def(
        "fusion_report",
        [](int N, int K) {
            const auto r = fusion::fusion_report(fusion::build_fusion_frame(require_set(N, K)));
            py::dict d;
            d["tight"] = r.tight;
            d["tight_bound"] = r.tight_bound;
            d["equidistant"] = r.equidistant;
            d["distance_squared"] = r.distance_squared ? py::cast(*r.distance_squared) : py::none();
            d["simplex_bound"] = r.simplex_bound;
            d["sparsity"] = r.sparsity;
            d["optimal_packing"] = r.optimal_packing;
            d["chordal_distances"] = r.chordal_distances;
            return d;
        },
        py::arg("N"), py::arg("K"));

    m.def(
        "basis_pursuit",
        [](const CMatrix& A, const CVector& y, double rho, int max_iters, double tol) {
            return solve_dict(solvers::basis_pursuit(A, y, solver_config(rho, max_iters, tol)));
        },
        py::arg("A"), py::arg("y"), py::arg("rho") = 1.0, py::arg("max_iters") = 5000, py::arg("tol") = 1e-9);
    m.def(
        "block_basis_pursuit",
        [](const CMatrix& A, const CVector& y, std::size_t block_size, double rho, int max_iters, double tol) {
            if (block_size == 0 || A.cols() % static_cast<Eigen::Index>(block_size) != 0)
                throw InvalidInput("block_size must divide the number of columns");
            const solvers::BlockStructure blocks(static_cast<std::size_t>(A.cols()) / block_size, block_size);
            return solve_dict(solvers::block_basis_pursuit(A, y, blocks, solver_config(rho, max_iters, tol)));
        },
        py::arg("A"), py::arg("y"), py::arg("block_size"), py::arg("rho") = 1.0, py::arg("max_iters") = 5000,
        py::arg("tol") = 1e-9);
    m.def(
        "fusion_operator",
        [](const CMatrix& a, int N, int K) {
            return CMatrix(solvers::assemble_fusion_operator(a, fusion::build_fusion_frame(require_set(N, K))).effective);
        },
        py::arg("a"), py::arg("N"), py::arg("K"));

    m.def(
        "run_classic_experiment",
        [](int N, int K, std::vector<std::string> generators, std::vector<int> sparsities, int trials,
           std::uint64_t seed, unsigned threads) {
            experiments::ClassicExperimentConfig c;
            c.N = N;
            c.K = K;
            c.generators.clear();
            for (const auto& g : generators) {
                const auto k = gabor::parse_generator_kind(g);
                if (!k) throw InvalidInput("unknown generator '" + g + "'");
                c.generators.push_back(*k);
            }
            c.sparsities = std::move(sparsities);
            c.trials = trials;
            c.seed = seed;
            c.threads = threads;
            py::gil_scoped_release release;
            auto curves = experiments::run_classic_experiment(c);
            py::gil_scoped_acquire acquire;
            return curves_list(curves);
        },
        py::arg("N"), py::arg("K"), py::arg("generators"), py::arg("sparsities"), py::arg("trials") = 50,
        py::arg("seed") = 0, py::arg("threads") = 0);
    m.def(
        "run_fusion_experiment",
        [](int N, int K, std::vector<int> measurements, std::vector<int> sparsities, int trials, std::uint64_t seed,
           unsigned threads) {
            experiments::FusionExperimentConfig c;
            c.N = N;
            c.K = K;
            c.measurements = std::move(measurements);
            c.sparsities = std::move(sparsities);
            c.trials = trials;
            c.seed = seed;
            c.threads = threads;
            py::gil_scoped_release release;
            auto curves = experiments::run_fusion_experiment(c);
            py::gil_scoped_acquire acquire;
            return curves_list(curves);
        },
        py::arg("N"), py::arg("K"), py::arg("measurements"), py::arg("sparsities"), py::arg("trials") = 50,
        py::arg("seed") = 0, py::arg("threads") = 0);
}
