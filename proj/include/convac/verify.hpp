#ifndef CONVAC_VERIFY_HPP
#define CONVAC_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "convac/network.hpp"

namespace convac {

struct CaseResult {
    std::string name;
    bool pass = false;
    bool cross_ok = true;  // float-mode rank agreed with the exact rank (when run)
    std::string detail;
};

struct SuiteResult {
    std::string name;
    std::vector<CaseResult> cases;

    bool passed() const {
        for (const CaseResult& c : cases)
            if (!c.pass || !c.cross_ok) return false;
        return true;
    }
};

struct VerifyOptions {
    std::uint64_t seed = 7;
    int trials = 100;
    long long cap = 1 << 20;
    int threads = 1;
    bool cross_mode = false;  // also run every fixture in float mode and compare ranks
    double tol = 1e-9;
};

// Suite names: prop1, lemma1, thm1, claim4, thm3, prop2.
std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, const VerifyOptions& options);
std::vector<SuiteResult> run_all_suites(const VerifyOptions& options);

// Greedy layer alignment for realizing B on the wider architecture A: every A
// layer either matches the next B layer (same stride, window and channels at
// least as large) or is an inserted stride-1 layer. Returns the mapping
// consumed by lift_params; throws if no alignment exists.
std::vector<int> derive_lift_mapping(const NetworkSpec& a, const NetworkSpec& b);

// A random non-overlapping network in the shape whose score functions carry a
// coefficients tensor: 1x1 mixing layers, exactly tiling pooling layers (some
// per-channel), and a bias-free 1x1 readout after the spatial collapse.
// H=4 pairs only with M=2 to stay under the default enumeration cap.
struct SampledNetwork {
    NetworkSpec spec;
    NetworkParams<Rational> params;
    int next_to_last = 0;  // channels entering the readout layer
};
SampledNetwork sample_vanilla_network(std::uint64_t seed, bool zero_bias);

// Uniform random tensor over the value grid {+-1/2, +-1, +-3/2}.
DenseTensor<Rational> random_tensor(const std::vector<int>& dims, std::uint64_t seed);

}  // namespace convac

#endif
