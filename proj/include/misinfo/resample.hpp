#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "misinfo/common.hpp"
#include "misinfo/pipeline.hpp"
#include "misinfo/rng.hpp"

namespace misinfo::resample {

enum class Method { none, over, under };

inline Method method_from_string(const std::string& s) {
    if (s == "none") return Method::none;
    if (s == "over") return Method::over;
    if (s == "under") return Method::under;
    throw ConfigError("unknown resampling method '" + s + "' (expect none, over or under)");
}

inline std::string to_string(Method m) {
    switch (m) {
        case Method::none: return "none";
        case Method::over: return "over";
        case Method::under: return "under";
    }
    return "none";
}

struct ResampleConfig {
    Method method = Method::none;
    std::uint64_t seed = 0;
    double target_ratio = 1.0;  // minority:majority after resampling
};

struct ResampleResult {
    pipeline::FeatureMatrix matrix;
    // For each output row, the row index it was copied from in the input.
    // Over-sampling duplicates rows; no interpolated values ever appear.
    std::vector<std::size_t> source_rows;
};

// Random over-sampling duplicates minority rows (with replacement, originals
// retained); random under-sampling keeps a without-replacement subset of the
// majority. Training-fold use only; the evaluation loop owns the call.
inline ResampleResult resample(const pipeline::FeatureMatrix& m, const ResampleConfig& config) {
    if (m.labels.size() != m.n_rows) throw ValidationError("resample: matrix has no aligned labels");
    if (config.target_ratio <= 0.0) throw ConfigError("resample: target_ratio must be > 0");

    std::vector<std::size_t> fake, real;
    for (std::size_t i = 0; i < m.labels.size(); ++i)
        (m.labels[i] == 1 ? fake : real).push_back(i);
    if (fake.empty() || real.empty())
        throw ValidationError("resample: both classes must be present");

    if (config.method == Method::none) {
        ResampleResult out{m, {}};
        out.source_rows.resize(m.n_rows);
        for (std::size_t i = 0; i < m.n_rows; ++i) out.source_rows[i] = i;
        return out;
    }

    auto& minority = fake.size() <= real.size() ? fake : real;
    auto& majority = fake.size() <= real.size() ? real : fake;

    auto rng = make_rng(derive_seed(config.seed, "resample"));
    std::vector<std::size_t> chosen;
    if (config.method == Method::over) {
        const auto target =
            static_cast<std::size_t>(std::llround(config.target_ratio * static_cast<double>(majority.size())));
        chosen.reserve(majority.size() + target);
        chosen.insert(chosen.end(), majority.begin(), majority.end());
        chosen.insert(chosen.end(), minority.begin(), minority.end());
        for (std::size_t i = minority.size(); i < target; ++i)
            chosen.push_back(minority[uniform_index(rng, minority.size())]);
    } else {
        const auto target = static_cast<std::size_t>(
            std::llround(static_cast<double>(minority.size()) / config.target_ratio));
        auto pool = majority;
        shuffle_inplace(pool, rng);
        pool.resize(std::min(target, pool.size()));
        chosen.reserve(minority.size() + pool.size());
        chosen.insert(chosen.end(), pool.begin(), pool.end());
        chosen.insert(chosen.end(), minority.begin(), minority.end());
    }
    shuffle_inplace(chosen, rng);

    ResampleResult out;
    out.matrix = m.select_rows(chosen);
    out.source_rows = std::move(chosen);
    return out;
}

}  // namespace misinfo::resample
