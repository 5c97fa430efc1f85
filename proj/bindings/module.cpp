#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "convac/arch_json.hpp"
#include "convac/constructions.hpp"
#include "convac/grid.hpp"
#include "convac/linalg.hpp"
#include "convac/verify.hpp"

namespace py = pybind11;
using namespace convac;

namespace {

NetworkSpec spec_of(const std::string& arch_text) { return arch_from_string(arch_text); }

py::dict bound_dict(const ConvPoolBound& bound) {
    py::dict out;
    out["closed_form_exponent"] = rational_to_double(bound.closed_form_exponent);
    out["closed_form_exponent_exact"] = rational_to_string(bound.closed_form_exponent);
    out["exact_exponent"] = bound.exact_exponent;
    out["first_block"] = bound.first_block;
    out["value"] = bound.exact_value.get_str();
    out["log10"] = bound.log10_value;
    return out;
}

py::dict rank_dict(int rank, const BigInt& expected, long long exponent) {
    py::dict out;
    out["rank"] = rank;
    out["expected"] = expected.get_str();
    out["exponent"] = exponent;
    out["match"] = BigInt(rank) == expected;
    return out;
}

}  // namespace

PYBIND11_MODULE(_convac, m) {
    m.doc() = "Grid tensors, matricization ranks, and receptive-field bounds for "
              "overlapping convolutional arithmetic circuits.";

    m.def("analyze_json", [](const std::string& arch_text) {
        return analysis_to_json(spec_of(arch_text)).dump();
    },
          py::arg("arch"), "Full analysis report as a JSON string.");

    m.def("total_stride", [](const std::string& arch_text, int layer) {
        return total_stride(spec_of(arch_text), layer);
    },
          py::arg("arch"), py::arg("layer"));

    m.def("total_receptive", [](const std::string& arch_text, int layer) {
        return total_receptive(spec_of(arch_text), layer);
    },
          py::arg("arch"), py::arg("layer"));

    m.def("alpha_min_receptive",
          [](const std::string& arch_text, int layer, long long alpha) {
              const AlphaMinResult got = alpha_min_receptive(spec_of(arch_text), layer, alpha);
              py::dict out;
              out["feasible"] = got.feasible;
              if (got.feasible) {
                  out["value"] = got.value;
                  out["windows"] = got.windows;
              }
              return out;
          },
          py::arg("arch"), py::arg("layer"), py::arg("alpha"));

    m.def("conv_pool_bound",
          [](int b, int h, int m) { return bound_dict(conv_pool_bound(b, h, m)); }, py::arg("b"),
          py::arg("h"), py::arg("m"));

    m.def("vgg_effective_b", &vgg_effective_b, py::arg("k"), py::arg("c"));

    m.def("rank_exact",
          [](int rows, int cols, const std::vector<std::string>& entries) {
              if (static_cast<long long>(entries.size()) !=
                  static_cast<long long>(rows) * cols)
                  throw std::invalid_argument("entry count does not match the shape");
              Matrix<Rational> mat(rows, cols);
              for (std::size_t i = 0; i < entries.size(); ++i)
                  mat.data[i] = parse_rational(entries[i]);
              return convac::rank_exact(mat);
          },
          py::arg("rows"), py::arg("cols"), py::arg("entries"),
          "Exact rank of a matrix given as row-major 'p/q' strings.");

    m.def("claim3_rank",
          [](int h, int m, int r, int s, int d, bool vertical, long long cap, int threads) {
              Claim3Config config{h, m, r, s, d,
                                  vertical ? Axis::vertical : Axis::horizontal};
              const ConstructionNetwork net = claim3_network(config);
              const DenseTensor<Rational> grid =
                  grid_tensor(net.spec, net.params, Matrix<Rational>::identity(m), 0,
                              GridOptions{cap, threads});
              const IndexPartition part =
                  vertical ? top_bottom_partition(h) : left_right_partition(h);
              return rank_dict(convac::rank_exact(matricize(grid, part)), net.expected_rank,
                               net.exponent);
          },
          py::arg("h"), py::arg("m"), py::arg("r"), py::arg("s"), py::arg("d"),
          py::arg("vertical") = false, py::arg("cap") = (1 << 20), py::arg("threads") = 1,
          "Exact matricization rank attained by the anchor-pair construction.");

    m.def("theorem3_rank",
          [](int h, int m, const std::vector<std::pair<int, int>>& side_p,
             const std::vector<std::pair<int, int>>& side_q, bool shared, int d1, long long cap,
             int threads) {
              Theorem3Config config;
              config.h = h;
              config.m = m;
              config.shared = shared;
              config.d1 = d1 > 0 ? d1 : (shared ? m * h * h : m);
              config.side_p = side_p;
              config.side_q = side_q;
              const ConstructionNetwork net = theorem3_network(config);
              const DenseTensor<Rational> grid =
                  grid_tensor(net.spec, net.params, Matrix<Rational>::identity(m), 0,
                              GridOptions{cap, threads});
              const IndexPartition part = position_partition(h, side_p, side_q);
              return rank_dict(convac::rank_exact(matricize(grid, part)), net.expected_rank,
                               net.exponent);
          },
          py::arg("h"), py::arg("m"), py::arg("side_p"), py::arg("side_q"),
          py::arg("shared") = false, py::arg("d1") = 0, py::arg("cap") = (1 << 20),
          py::arg("threads") = 1,
          "Exact matricization rank of the full-window construction for an even partition.");

    m.def("random_rank",
          [](const std::string& arch_text, std::uint64_t seed, const std::string& partition,
             long long cap, int threads) {
              const NetworkSpec spec = spec_of(arch_text);
              const NetworkParams<Rational> params = random_params(spec, seed);
              const DenseTensor<Rational> grid =
                  grid_tensor(spec, params, Matrix<Rational>::identity(spec.m), 0,
                              GridOptions{cap, threads});
              const IndexPartition part = partition == "top-bottom"
                                              ? top_bottom_partition(spec.h)
                                              : left_right_partition(spec.h);
              return convac::rank_exact(matricize(grid, part));
          },
          py::arg("arch"), py::arg("seed"), py::arg("partition") = "left-right",
          py::arg("cap") = (1 << 20), py::arg("threads") = 1,
          "Exact grid-tensor rank under random rational parameters.");

    m.def("verify_suite",
          [](const std::string& name, std::uint64_t seed, int trials, bool cross_mode) {
              VerifyOptions options;
              options.seed = seed;
              options.trials = trials;
              options.cross_mode = cross_mode;
              const SuiteResult result = run_suite(name, options);
              py::list cases;
              for (const CaseResult& c : result.cases) {
                  py::dict entry;
                  entry["name"] = c.name;
                  entry["pass"] = c.pass;
                  entry["cross_mode_ok"] = c.cross_ok;
                  entry["detail"] = c.detail;
                  cases.append(entry);
              }
              py::dict out;
              out["suite"] = result.name;
              out["pass"] = result.passed();
              out["cases"] = cases;
              return out;
          },
          py::arg("name"), py::arg("seed") = 7, py::arg("trials") = 100,
          py::arg("cross_mode") = false);
}
