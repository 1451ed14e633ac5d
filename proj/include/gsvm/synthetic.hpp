#pragma once

#include <cstdint>
#include <vector>

#include "gsvm/trial_set.hpp"

namespace gsvm {

/// Unit-peak discretized Gaussian bump: center at round(0.3 * samples)
/// (a ~300 ms peak in a 1000 ms window), width samples / 4.
Vector default_template(int samples);

/// Simulated oddball dataset: positive trials carry the waveform on each
/// relevant sensor, everything gets i.i.d. Gaussian noise.
struct SimConfig {
    int sensors = 16;
    int relevant = 8;
    int samples_per_sensor = 8;
    int n_total = 11000;
    int n_train = 1000;
    double noise_std = 0.2;
    double positive_rate = 1.0 / 6.0;
    // Peak amplitude applied to the default waveform, relative to the 0.2
    // noise floor. The default puts sensor recovery in the regime where
    // group penalties separate relevant from irrelevant channels inside
    // the standard lambda grid.
    double template_amplitude = 0.175;
    // Explicit waveform (length samples_per_sensor); empty selects
    // template_amplitude * default_template(samples_per_sensor).
    Vector waveform;
    // Explicit relevant set; empty selects a seeded random subset.
    std::vector<int> relevant_sensors;
    std::uint64_t seed = 0;

    void validate() const;
    Vector effective_waveform() const;
};

struct GroundTruth {
    std::vector<int> relevant_sensors;
};

struct SimData {
    TrialSet train;
    TrialSet test;
    GroundTruth truth;
};

/// Deterministic in the seed: first draws the relevant set, then labels,
/// then noise (row-major), then the train/test permutation.
SimData generate(const SimConfig& config);

}  // namespace gsvm
