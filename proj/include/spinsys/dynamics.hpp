// Markov-chain diagnostics: flip dynamics over Kempe components, Glauber
// dynamics, coupled steps, Dobrushin influence matrices, and Monte Carlo
// contraction / coupling-independence estimates.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinsys/model.hpp"
#include "spinsys/oracle.hpp"

namespace spinsys {

// splitmix64: fixed, seedable, trivially splittable; every report records
// the seed so runs replay exactly.
struct SplitMix64 {
    uint64_t state = 0;

    explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0,1), 53-bit resolution
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    uint64_t next_below(uint64_t n) {
        // rejection keeps it unbiased and platform-deterministic
        uint64_t lim = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = next();
        } while (x >= lim);
        return x % n;
    }
    static SplitMix64 derive(uint64_t seed, uint64_t stream) {
        SplitMix64 g(seed ^ (0x2545f4914f6cdd1dULL * (stream + 1)));
        g.next();
        return g;
    }
};

struct FlipParams {
    std::string name;
    std::vector<double> p; // p[l-1] = flip probability for components of size l

    double prob(size_t l) const { return l >= 1 && l <= p.size() ? p[l - 1] : 0.0; }
    // "vigoda2000" (the classical flip parameters, after Vigoda 2000) or
    // "uniform-lazy" (p_l = 1/l for l <= 6)
    static FlipParams preset(const std::string& name);
};

struct ChainState {
    Config x;
    SplitMix64 rng;
};

// Conditional model induced by a pinning: free vertices keep their induced
// subgraph, vertex weights absorb the pinned boundary. vmap (optional)
// receives original vertex ids.
SpinModel induced_model(const SpinModel& m, const Pinning& pin, std::vector<int>* vmap = nullptr);

// Kempe component S_X(v,c): vertices reachable from v via paths alternating
// between X(v) and c; empty when c == X(v).
std::vector<int> kempe_component(const SpinModel& m, const Config& x, int v, int c);

// One flip-dynamics update: uniform (v,c), flip the Kempe component of size l
// with probability p_l / l, rejecting flips that leave any vertex's list.
void flip_step(const SpinModel& m, ChainState& st, const FlipParams& fp);

// One Glauber update: uniform v resampled from its exact local conditional.
void glauber_step(const SpinModel& m, ChainState& st);

// One coupled flip update for two models differing only in the lists near
// the designated vertex: same (u,c); components of size >= 7 stay lazily;
// moves not touching N(v) couple perfectly; otherwise independent.
void coupled_flip_step(const SpinModel& mp, const SpinModel& mq, int v, Config& xp, Config& xq,
                       SplitMix64& rng, const FlipParams& fp);

// One coupled Glauber update for a single model: same vertex, maximal
// (TV-optimal) coupling of the two local conditionals.
void coupled_glauber_step(const SpinModel& m, Config& x, Config& y, SplitMix64& rng);

struct DobrushinResult {
    std::vector<std::vector<Rat>> rho;
    Rat norm1; // max row sum
};

// rho(u,v) by enumerating the neighbourhood boundary exactly (entries depend
// only on N(v) values for pairwise models).
DobrushinResult dobrushin_matrix(const SpinModel& m);
// Literal sup over full complement pinnings; debug scale only.
DobrushinResult dobrushin_matrix_literal(const SpinModel& m, int max_n = 8);

enum class ChainKind { flip, glauber };

struct ContractionReport {
    std::string chain;
    std::string preset;
    int trials = 0;
    int steps = 0;
    uint64_t seed = 0;
    std::vector<double> mean_dist; // index = step
    double factor = 0;             // pooled per-step contraction estimate
    double factor_se = 0;
    bool valid = false; // false when trials == 0 or distances vanish
};

// Coupled-chain Hamming contraction, Monte Carlo estimate (never a proof):
// starts at greedily built proper states differing at one vertex.
ContractionReport contraction_estimate(const SpinModel& m, ChainKind kind, const FlipParams& fp,
                                       int trials, int steps, uint64_t seed);

// Exact coupling-independence value: W1 between the two conditionals.
Rat ci_estimate_exact(const Oracle& oracle, const Pinning& sigma, const Pinning& tau);

struct CiMcReport {
    double value = 0;     // c_disagreement / delta
    double c_dis = 0;     // one-step disagreement estimate
    double delta = 0;     // per-step contraction gap estimate
    int trials = 0;
    uint64_t seed = 0;
    bool heuristic = true;
};

// Monte Carlo counterpart via the disagreement/contraction bound; labelled
// heuristic, no variance guarantee.
CiMcReport ci_estimate_mc(const SpinModel& m, const Pinning& sigma, const Pinning& tau,
                          ChainKind kind, const FlipParams& fp, int trials, int steps,
                          uint64_t seed);

// Greedy proper configuration with seeded random restarts; init error after
// 1000 failures.
Config random_proper_config(const SpinModel& m, SplitMix64& rng);

} // namespace spinsys
