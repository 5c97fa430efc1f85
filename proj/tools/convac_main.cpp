// convac: receptive-field analysis, grid-tensor ranks, and the verification
// suites for overlapping convolutional arithmetic circuits.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "convac/arch_json.hpp"
#include "convac/constructions.hpp"
#include "convac/grid.hpp"
#include "convac/linalg.hpp"
#include "convac/verify.hpp"

using namespace convac;
using nlohmann::json;

namespace {

constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;

enum class PartitionKind { left_right, top_bottom, custom };

struct PartitionChoice {
    PartitionKind kind = PartitionKind::left_right;
    IndexPartition partition;
};

PartitionChoice parse_partition(const std::string& text, int h) {
    PartitionChoice choice;
    if (text == "left-right") {
        choice.kind = PartitionKind::left_right;
        choice.partition = left_right_partition(h);
        return choice;
    }
    if (text == "top-bottom") {
        choice.kind = PartitionKind::top_bottom;
        choice.partition = top_bottom_partition(h);
        return choice;
    }
    if (text.rfind("custom:", 0) == 0) {
        const std::string body = text.substr(7);
        const std::size_t bar = body.find('|');
        if (bar == std::string::npos)
            throw std::invalid_argument("custom partition needs the form custom:1,3|2,4");
        auto side = [h](const std::string& csv) {
            std::vector<int> modes;
            std::stringstream in(csv);
            std::string item;
            while (std::getline(in, item, ',')) {
                const int mode = std::stoi(item);
                if (mode < 1 || mode > h * h)
                    throw std::invalid_argument("partition mode out of range 1.." +
                                                std::to_string(h * h));
                modes.push_back(mode - 1);
            }
            std::sort(modes.begin(), modes.end());
            return modes;
        };
        choice.kind = PartitionKind::custom;
        choice.partition =
            IndexPartition::checked(side(body.substr(0, bar)), side(body.substr(bar + 1)), h * h);
        return choice;
    }
    throw std::invalid_argument("unknown partition '" + text +
                                "' (expected left-right, top-bottom, or custom:...)");
}

std::string format_big(const BigInt& value) {
    const std::string digits = value.get_str();
    if (digits.size() <= 40) return digits;
    return digits.substr(0, 12) + "... (" + std::to_string(digits.size()) + " digits)";
}

void print_analysis_text(const NetworkSpec& spec, std::ostream& out) {
    const std::vector<int> sizes = spec.spatial_sizes();
    out << "architecture: H=" << spec.h << " M=" << spec.m << ", " << spec.depth()
        << (spec.depth() == 1 ? " layer" : " layers") << ", "
        << (spec.collapsing() ? "collapsing" : "non-collapsing") << ", "
        << (spec.non_overlapping() ? "non-overlapping" : "overlapping") << "\n\n";
    out << "layer     R     S     D  H_out    T_S    T_R  overlap\n";
    for (int l = 1; l <= spec.depth(); ++l) {
        const LayerSpec& layer = spec.layers[static_cast<std::size_t>(l - 1)];
        out << std::setw(5) << l << std::setw(6) << layer.r << std::setw(6) << layer.s
            << std::setw(6) << layer.d << std::setw(7) << sizes[static_cast<std::size_t>(l)]
            << std::setw(7) << total_stride(spec, l) << std::setw(7) << total_receptive(spec, l)
            << "  " << (layer.overlapping() ? "yes" : "no") << "\n";
    }
    out << "\n";

    if (spec.h % 2 != 0) {
        out << "rank bound skipped: the standard partitions need an even H\n";
    } else if (!spec.collapsing()) {
        out << "rank bound skipped: the network does not collapse to 1x1\n";
    } else {
        const BoundReport report = rank_lower_bound(spec);
        out << "grid-tensor rank lower bound (left-right and top-bottom partitions):\n";
        for (const BoundCandidate& cand : report.candidates) {
            out << "  K=" << cand.layer << ": " << cand.base << "^" << cand.exponent
                << "  (T_S " << cand.t_s << ", T_R " << cand.t_r << ", alpha-min "
                << cand.alpha_min << ", log10 " << std::fixed << std::setprecision(2)
                << cand.log10_value << std::defaultfloat << ")\n";
        }
        const BoundCandidate& best = report.best_candidate();
        out << "  best: " << best.base << "^" << best.exponent << " = " << format_big(best.value)
            << "  (log10 " << std::fixed << std::setprecision(2) << best.log10_value
            << std::defaultfloat << ")";
        if (spec.non_overlapping())
            out << "  [trivial: non-overlapping, bound is the halved channel floor]";
        out << "\n";
    }

    if (const auto pattern = match_conv_pool(spec)) {
        const ConvPoolBound bound = conv_pool_bound(pattern->b, spec.h, spec.m);
        out << "\nalternating conv-pool pattern: B=" << pattern->b << ", " << pattern->blocks
            << " blocks\n";
        out << "  closed-form exponent (log_M): "
            << rational_to_string(bound.closed_form_exponent) << " ~ " << std::fixed
            << std::setprecision(3) << rational_to_double(bound.closed_form_exponent)
            << std::defaultfloat << "\n";
        out << "  exact bound: " << spec.m << "^" << bound.exact_exponent << " = "
            << format_big(bound.exact_value) << " (first qualifying block "
            << bound.first_block << ", log10 " << std::fixed << std::setprecision(2)
            << bound.log10_value << std::defaultfloat << ")\n";
    }
}

int cmd_analyze(const std::string& path, const std::string& format) {
    const NetworkSpec spec = arch_from_file(path);
    if (format == "json")
        std::cout << analysis_to_json(spec).dump(2) << "\n";
    else
        print_analysis_text(spec, std::cout);
    return 0;
}

struct RankRequest {
    std::string arch_path;
    std::string params = "random:1";
    std::string partition = "left-right";
    std::string mode = "auto";
    double tol = 1e-9;
    int channel = 0;
    long long cap = 1 << 20;
    int threads = 1;
};

Axis axis_for(PartitionKind kind) {
    if (kind == PartitionKind::left_right) return Axis::horizontal;
    if (kind == PartitionKind::top_bottom) return Axis::vertical;
    throw std::invalid_argument("this parameter source needs a standard partition");
}

int cmd_rank(const RankRequest& request, const std::string& format) {
    const NetworkSpec spec = arch_from_file(request.arch_path);
    if (!spec.collapsing())
        throw std::invalid_argument(
            "rank needs a collapsing architecture (spatial size 1 after the last layer)");
    const PartitionChoice choice = parse_partition(request.partition, spec.h);

    const bool exact_mode =
        request.mode == "exact" || (request.mode == "auto" && spec.h <= 4);
    if (request.mode != "exact" && request.mode != "float" && request.mode != "auto")
        throw std::invalid_argument("mode must be exact, float, or auto");

    NetworkParams<Rational> params;
    std::optional<NetworkParams<double>> file_float_params;
    BigInt expected(-1);
    if (request.params.rfind("random:", 0) == 0) {
        params = random_params(spec, std::stoull(request.params.substr(7)));
    } else if (request.params == "claim3") {
        params = claim3_params(spec, axis_for(choice.kind));
        expected = bigint_pow(BigInt(std::min(spec.m, spec.layers.front().d)),
                              static_cast<unsigned long>(
                                  claim3_exponent(spec.h, spec.layers.front().r,
                                                  spec.layers.front().s)));
    } else if (request.params == "theorem3") {
        Theorem3Config config;
        config.h = spec.h;
        config.m = spec.m;
        if (spec.depth() != 2 || spec.layers[0].r != spec.h || spec.layers[0].s != 1 ||
            spec.layers[1].r != spec.h || spec.layers[1].s != spec.h || spec.layers[1].d != 1)
            throw std::invalid_argument(
                "theorem3 parameters need the two-layer shape {R=H,S=1,D} then {R=S=H,D=1}");
        config.d1 = spec.layers[0].d;
        config.shared = spec.layers[0].shared;
        for (int mode : choice.partition.p)
            config.side_p.emplace_back(mode / spec.h, mode % spec.h);
        for (int mode : choice.partition.q)
            config.side_q.emplace_back(mode / spec.h, mode % spec.h);
        const ConstructionNetwork net = theorem3_network(config);
        params = net.params;
        expected = net.expected_rank;
    } else if (request.params.rfind("file:", 0) == 0) {
        std::ifstream in(request.params.substr(5));
        if (!in) throw std::invalid_argument("cannot open params file");
        const json doc = json::parse(std::string(std::istreambuf_iterator<char>(in), {}));
        if (exact_mode)
            params = params_from_json(doc, spec);
        else
            file_float_params = params_from_json_double(doc, spec);
    } else {
        throw std::invalid_argument("unknown params source '" + request.params +
                                    "' (expected random:<seed>, claim3, theorem3, file:<path>)");
    }

    GridOptions go{request.cap, request.threads};
    json out;
    int rank = -1;
    std::vector<double> tail;
    int rows = 0, cols = 0;
    if (exact_mode) {
        const DenseTensor<Rational> grid =
            grid_tensor(spec, params, Matrix<Rational>::identity(spec.m), request.channel, go);
        const Matrix<Rational> mat = matricize(grid, choice.partition);
        rows = mat.rows;
        cols = mat.cols;
        rank = rank_exact(mat);
    } else {
        const DenseTensor<double> grid =
            grid_tensor(spec, file_float_params ? *file_float_params : params_to_double(params),
                        matrix_to_double(Matrix<Rational>::identity(spec.m)), request.channel, go);
        const Matrix<double> mat = matricize(grid, choice.partition);
        rows = mat.rows;
        cols = mat.cols;
        const std::vector<double> sv = singular_values(mat);
        rank = rank_numeric(mat, request.tol);
        const double cutoff =
            sv.empty() ? 0.0 : request.tol * std::max(mat.rows, mat.cols) * sv.front();
        // A window of singular values around the threshold.
        for (int i = std::max(0, rank - 3); i < std::min<int>(static_cast<int>(sv.size()), rank + 3);
             ++i)
            tail.push_back(sv[static_cast<std::size_t>(i)]);
        out["cutoff"] = cutoff;
    }

    const bool match = expected < 0 || BigInt(rank) == expected;
    out["mode"] = exact_mode ? "exact" : "float";
    out["partition"] = request.partition;
    out["rows"] = rows;
    out["cols"] = cols;
    out["rank"] = rank;
    if (!tail.empty()) out["singular_values_near_threshold"] = tail;
    if (expected >= 0) {
        out["expected"] = expected.get_str();
        out["match"] = match;
    }

    if (format == "json") {
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "matricization: " << rows << " x " << cols << " (" << request.partition
                  << "), mode " << (exact_mode ? "exact" : "float") << "\n";
        std::cout << "rank: " << rank << "\n";
        if (!tail.empty()) {
            std::cout << "singular values near the threshold (cutoff "
                      << out["cutoff"].get<double>() << "):";
            for (double s : tail) std::cout << " " << s;
            std::cout << "\n";
        }
        if (expected >= 0)
            std::cout << "expected " << expected.get_str() << ": "
                      << (match ? "match" : "MISMATCH") << "\n";
    }
    return match ? 0 : kExitVerifyFailure;
}

int cmd_verify(const std::string& suite, const VerifyOptions& options, const std::string& format) {
    std::vector<SuiteResult> results;
    if (suite == "all") {
        results = run_all_suites(options);
    } else {
        results.push_back(run_suite(suite, options));
    }

    bool all = true;
    if (format == "json") {
        json out = json::array();
        for (const SuiteResult& sr : results) {
            json cases = json::array();
            for (const CaseResult& c : sr.cases) {
                cases.push_back({{"name", c.name},
                                 {"pass", c.pass},
                                 {"cross_mode_ok", c.cross_ok},
                                 {"detail", c.detail}});
            }
            all = all && sr.passed();
            out.push_back({{"suite", sr.name}, {"pass", sr.passed()}, {"cases", cases}});
        }
        std::cout << out.dump(2) << "\n";
    } else {
        for (const SuiteResult& sr : results) {
            for (const CaseResult& c : sr.cases)
                std::cout << (c.pass && c.cross_ok ? "[PASS] " : "[FAIL] ") << sr.name << "/"
                          << c.name << " -- " << c.detail << "\n";
            all = all && sr.passed();
        }
        std::cout << (all ? "verify: all selected suites passed"
                          : "verify: FAILURES above") << "\n";
    }
    return all ? 0 : kExitVerifyFailure;
}

int cmd_equiv_prop1(const std::string& path_a, const std::string& path_b, std::uint64_t seed,
                    int trials, const std::string& format) {
    const NetworkSpec a = arch_from_file(path_a);
    const NetworkSpec b = arch_from_file(path_b);
    const std::vector<int> mapping = derive_lift_mapping(a, b);
    const NetworkParams<Rational> pb = random_params(b, seed);
    const NetworkParams<Rational> pa = lift_params(a, b, pb, mapping);
    int mismatches = 0;
    for (int t = 0; t < trials; ++t) {
        const DenseTensor<Rational> input = random_tensor({b.m, b.h, b.h}, seed + 1000 + t);
        const DenseTensor<Rational> out_b = forward_network(b, pb, input);
        const DenseTensor<Rational> out_a = forward_network(a, pa, input);
        bool same = out_a.dims[1] == out_b.dims[1] && out_a.dims[2] == out_b.dims[2];
        for (int c = 0; same && c < out_a.dims[0]; ++c)
            for (int y = 0; same && y < out_a.dims[1]; ++y)
                for (int x = 0; same && x < out_a.dims[2]; ++x) {
                    const Rational& got = out_a.at({c, y, x});
                    same = c < out_b.dims[0] ? got == out_b.at({c, y, x}) : got == 0;
                }
        if (!same) ++mismatches;
    }
    if (format == "json") {
        std::cout << json{{"kind", "prop1"},
                          {"trials", trials},
                          {"mismatches", mismatches},
                          {"mapping", mapping}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "lift mapping:";
        for (int m : mapping) std::cout << " " << (m < 0 ? "insert" : std::to_string(m));
        std::cout << "\n"
                  << trials - mismatches << "/" << trials << " random inputs agree exactly\n";
    }
    return mismatches == 0 ? 0 : kExitVerifyFailure;
}

int cmd_equiv_claim4(const std::string& path, std::uint64_t seed, int trials,
                     const std::string& format) {
    const NetworkSpec phi_spec = arch_from_file(path);
    if (phi_spec.depth() < 1) throw std::invalid_argument("the stack needs at least one layer");
    int inner = phi_spec.layers.front().d;
    for (int l = 0; l + 1 < phi_spec.depth(); ++l)
        inner = std::min(inner, phi_spec.layers[static_cast<std::size_t>(l)].d);
    const int active = std::min(phi_spec.layers.back().d, phi_spec.depth() >= 2 ? inner / 2
                                                                                : inner);
    if (active < 1) throw std::invalid_argument("not enough channels to host the two halves");

    AnchorPairLayer psi;
    psi.s = static_cast<int>(total_stride(phi_spec, phi_spec.depth()));
    const AlphaMinResult shrink =
        alpha_min_receptive(phi_spec, phi_spec.depth(), phi_spec.h / 2);
    if (!shrink.feasible)
        throw std::invalid_argument("the stack's receptive field never exceeds H/2");
    psi.r = static_cast<int>(shrink.value);
    psi.active = active;
    psi.a = Matrix<Rational>(phi_spec.m, active);
    std::mt19937_64 rng(seed);
    std::vector<Rational> grid_values;
    for (int v : {-3, -2, -1, 1, 2, 3}) grid_values.push_back(make_rational(v, 2));
    for (Rational& value : psi.a.data)
        value = grid_values[static_cast<std::size_t>(rng() % grid_values.size())];
    for (int c = 0; c < active; ++c)
        psi.beta.push_back(grid_values[static_cast<std::size_t>(rng() % grid_values.size())]);

    const Claim4Compiled compiled = claim4_compile(phi_spec.h, phi_spec.m, phi_spec.layers, psi);
    const NetworkSpec psi_spec{phi_spec.h, phi_spec.m, {compiled.psi_layer}};
    const NetworkParams<Rational> psi_params{{compiled.psi_params}};

    int mismatches = 0;
    for (int t = 0; t < trials; ++t) {
        const DenseTensor<Rational> input =
            random_tensor({phi_spec.m, phi_spec.h, phi_spec.h}, seed + 2000 + t);
        const DenseTensor<Rational> phi_out =
            forward_network(phi_spec, compiled.phi_params, input);
        const DenseTensor<Rational> psi_out = forward_network(psi_spec, psi_params, input);
        bool same = phi_out.dims[1] == psi_out.dims[1];
        for (int c = 0; same && c < phi_out.dims[0]; ++c)
            for (int y = 0; same && y < phi_out.dims[1]; ++y)
                for (int x = 0; same && x < phi_out.dims[2]; ++x) {
                    const Rational& got = phi_out.at({c, y, x});
                    same = c < active ? got == psi_out.at({c, y, x}) : got == 0;
                }
        if (!same) ++mismatches;
    }
    if (format == "json") {
        std::cout << json{{"kind", "claim4"},
                          {"psi", {{"R", psi.r}, {"S", psi.s}, {"D", active}}},
                          {"windows", compiled.windows},
                          {"trials", trials},
                          {"mismatches", mismatches}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "single-layer form: R=" << psi.r << " S=" << psi.s << " D=" << active
                  << ", shrunken windows:";
        for (int w : compiled.windows) std::cout << " " << w;
        std::cout << "\n"
                  << trials - mismatches << "/" << trials << " random inputs agree exactly\n";
    }
    return mismatches == 0 ? 0 : kExitVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid-tensor rank analysis for overlapping convolutional arithmetic circuits"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string format = "text";
    long long cap = 1 << 20;
    int threads = 1;
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--cap", cap, "Grid enumeration cap (number of template assignments)");
    app.add_option("--threads", threads, "Worker threads for grid enumeration");

    auto* analyze = app.add_subcommand("analyze", "Receptive-field table and rank lower bound");
    std::string analyze_path;
    analyze->add_option("arch", analyze_path, "Architecture JSON file")->required();

    auto* rank = app.add_subcommand("rank", "Matricization rank of a grid tensor");
    RankRequest request;
    rank->add_option("arch", request.arch_path, "Architecture JSON file")->required();
    rank->add_option("--params", request.params,
                     "random:<seed>, claim3, theorem3, or file:<path>");
    rank->add_option("--partition", request.partition,
                     "left-right, top-bottom, or custom:<p|q> (1-based modes)");
    rank->add_option("--mode", request.mode, "exact, float, or auto");
    rank->add_option("--tol", request.tol, "Float-mode rank tolerance");
    rank->add_option("--channel", request.channel, "Output channel (0-based)");

    auto* verify = app.add_subcommand("verify", "Run the verification suites");
    std::string suite = "all";
    VerifyOptions options;
    verify->add_option("--suite", suite, "all, prop1, lemma1, thm1, claim4, thm3, prop2")
        ->check(CLI::IsMember({"all", "prop1", "lemma1", "thm1", "claim4", "thm3", "prop2"}));
    verify->add_option("--seed", options.seed, "Base seed for the random sweeps");
    verify->add_option("--trials", options.trials, "Trials per sweep");
    verify->add_flag("--cross-mode", options.cross_mode,
                     "Also run float twins of every rank fixture");
    verify->add_option("--tol", options.tol, "Float-mode rank tolerance");

    auto* equiv = app.add_subcommand("equiv", "Functional-equivalence checks");
    std::string kind;
    std::string arch_a, arch_b, arch;
    std::uint64_t equiv_seed = 7;
    int equiv_trials = 50;
    equiv->add_option("kind", kind, "prop1 or claim4")
        ->required()
        ->check(CLI::IsMember({"prop1", "claim4"}));
    equiv->add_option("--arch-a", arch_a, "Wider architecture (prop1)");
    equiv->add_option("--arch-b", arch_b, "Narrower architecture (prop1)");
    equiv->add_option("--arch", arch, "Stack architecture (claim4)");
    equiv->add_option("--seed", equiv_seed, "Parameter seed");
    equiv->add_option("--trials", equiv_trials, "Random inputs to compare");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*analyze) return cmd_analyze(analyze_path, format);
        if (*rank) {
            request.cap = cap;
            request.threads = threads;
            return cmd_rank(request, format);
        }
        if (*verify) {
            options.cap = cap;
            options.threads = threads;
            return cmd_verify(suite, options, format);
        }
        if (*equiv) {
            if (kind == "prop1") {
                if (arch_a.empty() || arch_b.empty())
                    throw std::invalid_argument("equiv prop1 needs --arch-a and --arch-b");
                return cmd_equiv_prop1(arch_a, arch_b, equiv_seed, equiv_trials, format);
            }
            if (arch.empty()) throw std::invalid_argument("equiv claim4 needs --arch");
            return cmd_equiv_claim4(arch, equiv_seed, equiv_trials, format);
        }
    } catch (const CapExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
