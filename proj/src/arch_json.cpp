#include "convac/arch_json.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace convac {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.contains(it.key()))
            throw std::invalid_argument("unknown field '" + it.key() + "' in " + where);
}

int positive_int(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw std::invalid_argument("missing field '" + key + "' in " + where);
    const json& value = obj.at(key);
    if (!value.is_number_integer() || value.get<long long>() < 1)
        throw std::invalid_argument("field '" + key + "' in " + where +
                                    " must be a positive integer");
    return value.get<int>();
}

Rational scalar_from_json(const json& value) {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer()) return Rational(static_cast<long>(value.get<long long>()));
    throw std::invalid_argument("exact parameters must be integers or 'p/q' strings");
}

double scalar_from_json_double(const json& value) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) return rational_to_double(parse_rational(value.get<std::string>()));
    throw std::invalid_argument("float parameters must be numbers or 'p/q' strings");
}

template <typename T, typename Reader>
NetworkParams<T> read_params(const json& doc, const NetworkSpec& spec, Reader read_scalar) {
    if (!doc.is_object()) throw std::invalid_argument("params document must be an object");
    reject_unknown(doc, {"layers"}, "params document");
    if (!doc.contains("layers") || !doc.at("layers").is_array())
        throw std::invalid_argument("params document needs a 'layers' array");
    const json& layers = doc.at("layers");
    if (static_cast<int>(layers.size()) != spec.depth())
        throw std::invalid_argument("params layer count does not match the architecture");

    const std::vector<int> sizes = spec.spatial_sizes();
    NetworkParams<T> params;
    for (int l = 0; l < spec.depth(); ++l) {
        const json& jl = layers.at(static_cast<std::size_t>(l));
        reject_unknown(jl, {"shared", "kernels"}, "params layer");
        const bool shared = jl.value("shared", true);
        const LayerSpec& layer = spec.layers[static_cast<std::size_t>(l)];
        const int d_in = spec.in_channels(l);
        const int h_out = sizes[static_cast<std::size_t>(l + 1)];
        LayerParams<T> lp = LayerParams<T>::make(shared, layer.d, h_out, d_in, layer.r);

        const json& kernels = jl.at("kernels");
        const std::size_t expected =
            static_cast<std::size_t>(shared ? 1 : h_out * h_out) * layer.d;
        if (kernels.size() != expected)
            throw std::invalid_argument("params layer holds the wrong number of kernels");
        for (const json& jk : kernels) {
            reject_unknown(jk, {"channel", "u", "v", "w", "b"}, "kernel");
            const int c = jk.at("channel").get<int>();
            const int u = shared ? 0 : jk.at("u").get<int>();
            const int v = shared ? 0 : jk.at("v").get<int>();
            if (c < 0 || c >= layer.d || u < 0 || v < 0 || (!shared && (u >= h_out || v >= h_out)))
                throw std::invalid_argument("kernel index out of range");
            Kernel<T>& kernel = lp.at(c, u, v);
            const json& w = jk.at("w");
            const json& b = jk.at("b");
            if (static_cast<long long>(w.size()) != kernel.w.size() ||
                static_cast<long long>(b.size()) != kernel.b.size())
                throw std::invalid_argument("kernel value array has the wrong length");
            for (std::size_t i = 0; i < w.size(); ++i)
                kernel.w.data[i] = read_scalar(w.at(i));
            for (std::size_t i = 0; i < b.size(); ++i)
                kernel.b.data[i] = read_scalar(b.at(i));
        }
        params.layers.push_back(std::move(lp));
    }
    return params;
}

}  // namespace

NetworkSpec arch_from_json(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("architecture document must be an object");
    reject_unknown(doc, {"M", "H", "layers"}, "architecture document");
    NetworkSpec spec;
    spec.m = positive_int(doc, "M", "architecture document");
    spec.h = positive_int(doc, "H", "architecture document");
    if (!doc.contains("layers") || !doc.at("layers").is_array())
        throw std::invalid_argument("architecture document needs a 'layers' array");
    for (const json& jl : doc.at("layers")) {
        reject_unknown(jl, {"R", "S", "D", "shared"}, "layer");
        LayerSpec layer;
        layer.r = positive_int(jl, "R", "layer");
        layer.s = positive_int(jl, "S", "layer");
        layer.d = positive_int(jl, "D", "layer");
        if (jl.contains("shared")) {
            if (!jl.at("shared").is_boolean())
                throw std::invalid_argument("layer field 'shared' must be a boolean");
            layer.shared = jl.at("shared").get<bool>();
        }
        spec.layers.push_back(layer);
    }
    spec.validate();
    return spec;
}

NetworkSpec arch_from_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(std::string("architecture JSON parse error: ") + err.what());
    }
    return arch_from_json(doc);
}

NetworkSpec arch_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open architecture file: " + path);
    return arch_from_string(std::string(std::istreambuf_iterator<char>(in), {}));
}

json arch_to_json(const NetworkSpec& spec) {
    json layers = json::array();
    for (const LayerSpec& layer : spec.layers)
        layers.push_back({{"R", layer.r}, {"S", layer.s}, {"D", layer.d}, {"shared", layer.shared}});
    return json{{"M", spec.m}, {"H", spec.h}, {"layers", layers}};
}

json params_to_json(const NetworkParams<Rational>& params) {
    json layers = json::array();
    for (const LayerParams<Rational>& lp : params.layers) {
        json kernels = json::array();
        for (int u = 0; u < lp.positions; ++u)
            for (int v = 0; v < lp.positions; ++v)
                for (int c = 0; c < lp.channels; ++c) {
                    const Kernel<Rational>& kernel = lp.at(c, u, v);
                    json jk;
                    jk["channel"] = c;
                    if (!lp.shared) {
                        jk["u"] = u;
                        jk["v"] = v;
                    }
                    json w = json::array();
                    for (const Rational& value : kernel.w.data)
                        w.push_back(rational_to_string(value));
                    json b = json::array();
                    for (const Rational& value : kernel.b.data)
                        b.push_back(rational_to_string(value));
                    jk["w"] = std::move(w);
                    jk["b"] = std::move(b);
                    kernels.push_back(std::move(jk));
                }
        layers.push_back({{"shared", lp.shared}, {"kernels", std::move(kernels)}});
    }
    return json{{"layers", std::move(layers)}};
}

NetworkParams<Rational> params_from_json(const json& doc, const NetworkSpec& spec) {
    return read_params<Rational>(doc, spec, scalar_from_json);
}

NetworkParams<double> params_from_json_double(const json& doc, const NetworkSpec& spec) {
    return read_params<double>(doc, spec, scalar_from_json_double);
}

json bound_report_to_json(const BoundReport& report) {
    json candidates = json::array();
    for (const BoundCandidate& cand : report.candidates) {
        candidates.push_back({{"layer", cand.layer},
                              {"total_stride", cand.t_s},
                              {"total_receptive", cand.t_r},
                              {"alpha_min_receptive", cand.alpha_min},
                              {"windows", cand.windows},
                              {"base", cand.base},
                              {"exponent", cand.exponent},
                              {"value", cand.value.get_str()},
                              {"log10", cand.log10_value}});
    }
    const BoundCandidate& best = report.best_candidate();
    return json{{"valid_layers", report.valid_layers},
                {"candidates", std::move(candidates)},
                {"best",
                 {{"layer", best.layer},
                  {"base", best.base},
                  {"exponent", best.exponent},
                  {"value", best.value.get_str()},
                  {"log10", best.log10_value}}}};
}

json analysis_to_json(const NetworkSpec& spec) {
    const std::vector<int> sizes = spec.spatial_sizes();
    json layers = json::array();
    for (int l = 1; l <= spec.depth(); ++l) {
        const LayerSpec& layer = spec.layers[static_cast<std::size_t>(l - 1)];
        layers.push_back({{"layer", l},
                          {"R", layer.r},
                          {"S", layer.s},
                          {"D", layer.d},
                          {"shared", layer.shared},
                          {"H_out", sizes[static_cast<std::size_t>(l)]},
                          {"total_stride", total_stride(spec, l)},
                          {"total_receptive", total_receptive(spec, l)},
                          {"overlapping", layer.overlapping()}});
    }
    json out{{"M", spec.m},
             {"H", spec.h},
             {"layers", std::move(layers)},
             {"collapsing", spec.collapsing()},
             {"non_overlapping", spec.non_overlapping()}};

    if (spec.h % 2 == 0 && spec.collapsing()) {
        out["bound"] = bound_report_to_json(rank_lower_bound(spec));
    } else {
        out["bound"] = nullptr;
        out["bound_skipped"] =
            spec.h % 2 != 0 ? "H is odd; the standard partitions need an even H"
                            : "network does not collapse to 1x1, so no score function exists";
    }

    if (const auto pattern = match_conv_pool(spec)) {
        const ConvPoolBound bound = conv_pool_bound(pattern->b, spec.h, spec.m);
        out["conv_pool"] = {
            {"B", pattern->b},
            {"blocks", pattern->blocks},
            {"closed_form_exponent_log_m", rational_to_double(bound.closed_form_exponent)},
            {"closed_form_exponent", rational_to_string(bound.closed_form_exponent)},
            {"exact_exponent", bound.exact_exponent},
            {"first_block", bound.first_block},
            {"value", bound.exact_value.get_str()},
            {"log10", bound.log10_value}};
    }
    return out;
}

}  // namespace convac
