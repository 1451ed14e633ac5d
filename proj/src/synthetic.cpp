#include "gsvm/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gsvm/rng.hpp"

namespace gsvm {

Vector default_template(int samples) {
    if (samples < 1) {
        throw std::invalid_argument("template: sample count must be >= 1");
    }
    const double center = static_cast<double>(std::lround(0.3 * samples));
    const double width = static_cast<double>(samples) / 4.0;
    Vector wave(samples);
    for (int j = 0; j < samples; ++j) {
        const double offset = (static_cast<double>(j) - center) / width;
        wave[j] = std::exp(-0.5 * offset * offset);
    }
    return wave;
}

void SimConfig::validate() const {
    if (sensors < 1 || samples_per_sensor < 1) {
        throw std::invalid_argument("sim: sensor and sample counts must be >= 1");
    }
    if (relevant < 1 || relevant > sensors) {
        throw std::invalid_argument("sim: relevant count must lie in [1, sensors]");
    }
    if (!(positive_rate > 0.0 && positive_rate < 1.0)) {
        throw std::invalid_argument("sim: positive rate must lie in (0, 1)");
    }
    if (!(noise_std >= 0.0)) {
        throw std::invalid_argument("sim: noise std must be >= 0");
    }
    if (n_train < 1 || n_train >= n_total) {
        throw std::invalid_argument("sim: need 1 <= n_train < n_total");
    }
    if (waveform.size() != 0 && waveform.size() != samples_per_sensor) {
        throw std::invalid_argument("sim: waveform length must equal samples per sensor");
    }
    if (!relevant_sensors.empty()) {
        if (static_cast<int>(relevant_sensors.size()) != relevant) {
            throw std::invalid_argument("sim: relevant_sensors size must equal relevant");
        }
        std::vector<int> sorted = relevant_sensors;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] < 0 || sorted[i] >= sensors ||
                (i > 0 && sorted[i] == sorted[i - 1])) {
                throw std::invalid_argument("sim: relevant_sensors must be distinct sensor indices");
            }
        }
    }
}

Vector SimConfig::effective_waveform() const {
    if (waveform.size() != 0) return waveform;
    return template_amplitude * default_template(samples_per_sensor);
}

SimData generate(const SimConfig& config) {
    config.validate();
    rng::Engine eng(config.seed);

    const int p = config.sensors;
    const int r = config.samples_per_sensor;
    const int d = p * r;
    const int n = config.n_total;

    std::vector<int> relevant = config.relevant_sensors;
    if (relevant.empty()) {
        std::vector<int> perm = rng::permutation(p, eng);
        relevant.assign(perm.begin(), perm.begin() + config.relevant);
    }
    std::sort(relevant.begin(), relevant.end());

    Vector labels(n);
    for (int i = 0; i < n; ++i) {
        labels[i] = rng::uniform01(eng) < config.positive_rate ? 1.0 : -1.0;
    }

    const Vector wave = config.effective_waveform();
    Matrix features = Matrix::Zero(n, d);
    for (int i = 0; i < n; ++i) {
        if (labels[i] > 0.0) {
            for (int sensor : relevant) {
                features.row(i).segment(sensor * r, r) += wave.transpose();
            }
        }
    }
    rng::GaussianSampler gauss(eng);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) {
            features(i, j) += config.noise_std * gauss.next();
        }
    }

    const std::vector<int> perm = rng::permutation(n, eng);
    SimData out;
    out.truth.relevant_sensors = relevant;

    const SensorLayout layout{p, r, {}};
    auto take = [&](int begin, int count) {
        TrialSet split;
        split.layout = layout;
        split.features.resize(count, d);
        split.labels.resize(count);
        for (int i = 0; i < count; ++i) {
            split.features.row(i) = features.row(perm[static_cast<std::size_t>(begin + i)]);
            split.labels[i] = labels[perm[static_cast<std::size_t>(begin + i)]];
        }
        return split;
    };
    out.train = take(0, config.n_train);
    out.test = take(config.n_train, n - config.n_train);
    return out;
}

}  // namespace gsvm
