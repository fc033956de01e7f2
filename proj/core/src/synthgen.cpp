#include "helm/synthgen.hpp"

#include "helm/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace helm {

std::string_view to_string(Reading reading) {
    return reading == Reading::identity ? "identity" : "log";
}

Reading reading_from_string(std::string_view name) {
    if (name == "identity" || name == "id") return Reading::identity;
    if (name == "log") return Reading::log;
    throw InvalidArgument("unknown reading function '" + std::string(name) +
                          "' (expected identity or log)");
}

std::string_view to_string(Segment segment) {
    switch (segment) {
        case Segment::train: return "train";
        case Segment::val: return "val";
        case Segment::fp: return "fp";
        case Segment::fault1: return "fault1";
        case Segment::fault2: return "fault2";
        case Segment::fault3: return "fault3";
        case Segment::fault4: return "fault4";
        case Segment::fault5: return "fault5";
    }
    return "unknown";
}

void GeneratorSpec::validate() const {
    if (samples < kLayoutUnits || samples % kLayoutUnits != 0) {
        throw InvalidArgument("generator: sample count must be a positive multiple of 14");
    }
    if (sensors < 1) throw InvalidArgument("generator: need at least one sensor");
    if (base_signals < 1) throw InvalidArgument("generator: need at least one base signal");
}

RowRange segment_rows(Segment segment, Eigen::Index samples) {
    const Eigen::Index unit = samples / kLayoutUnits;
    if (segment == Segment::train) return {0, 7 * unit};
    const auto offset = static_cast<Eigen::Index>(segment) - 1;  // val -> 0
    return {(7 + offset) * unit, (8 + offset) * unit};
}

RngStream dataset_stream(std::uint64_t seed, std::uint64_t rep) {
    return RngStream(seed, rep).child(0x64617461ULL);
}

namespace {

double read_sensor(Reading reading, double v) {
    return reading == Reading::identity ? v : std::log(std::max(v, kLogReadingFloor));
}

}  // namespace

Matrix clean_readings(const Provenance& prov) {
    const Eigen::Index k = prov.base.rows();
    const Eigen::Index d = prov.sensor_gain.size();
    Matrix clean(k, d);
    for (Eigen::Index s = 0; s < d; ++s) {
        const Eigen::Index b = prov.sensor_source[static_cast<std::size_t>(s)];
        const double gain = prov.sensor_gain[s];
        for (Eigen::Index i = 0; i < k; ++i) {
            clean(i, s) = read_sensor(prov.spec.reading, gain * prov.base(i, b));
        }
    }
    return clean;
}

SyntheticDataset generate(const GeneratorSpec& spec, RngStream& rng) {
    spec.validate();
    const Eigen::Index k = spec.samples;
    const Eigen::Index d = spec.sensors;
    const int n = spec.base_signals;
    const Eigen::Index unit = k / kLayoutUnits;

    SyntheticDataset ds;
    Provenance& prov = ds.provenance;
    prov.spec = spec;
    prov.stream_id = rng.stream_id();

    prov.base_gain.resize(n);
    for (int i = 0; i < n; ++i) prov.base_gain[i] = rng.normal(0.0, 1.0);
    prov.fault_gain = rng.normal(0.0, 1.0);
    prov.base_offset.resize(n);
    for (int i = 0; i < n; ++i) prov.base_offset[i] = rng.uniform(0.0, 3.0);
    prov.fault_offset = rng.uniform(0.0, 3.0);

    // Latent signals, one column each.
    prov.base.resize(k, n);
    for (int i = 0; i < n; ++i) {
        for (Eigen::Index t = 0; t < k; ++t) prov.base(t, i) = rng.normal(0.0, 1.0);
    }
    Vector fault_signal(unit);
    for (Eigen::Index t = 0; t < unit; ++t) fault_signal[t] = rng.normal(0.0, 1.0);

    for (int i = 0; i < n; ++i) {
        prov.base.col(i) = prov.base.col(i).array() * prov.base_gain[i] + prov.base_offset[i];
    }

    if (spec.inject_faults) {
        auto signal = [&](Segment s) {
            const RowRange r = segment_rows(s, k);
            return prov.base.col(0).segment(r.begin, r.size());
        };
        signal(Segment::fault1) *= 1.2;
        signal(Segment::fault2) *= 1.5;
        signal(Segment::fault3).array() += 0.2 * prov.base_gain[0];
        signal(Segment::fault4) = (fault_signal.array() * prov.fault_gain + prov.fault_offset).matrix();
    }

    prov.sensor_gain.resize(d);
    for (Eigen::Index s = 0; s < d; ++s) prov.sensor_gain[s] = rng.uniform(0.0, 1.0);
    prov.sensor_source.resize(static_cast<std::size_t>(d));
    for (auto& b : prov.sensor_source) b = static_cast<int>(rng.uniform_int(0, n - 1));

    const Matrix clean = clean_readings(prov);
    const RowRange train = segment_rows(Segment::train, k);
    prov.noise_std.resize(d);
    for (Eigen::Index s = 0; s < d; ++s) {
        const auto window = clean.col(s).segment(train.begin, train.size());
        prov.noise_std[s] = 0.01 * (window.maxCoeff() - window.minCoeff());
    }

    ds.x.resize(k, d);
    for (Eigen::Index t = 0; t < k; ++t) {
        for (Eigen::Index s = 0; s < d; ++s) {
            ds.x(t, s) = clean(t, s) + rng.normal(0.0, 1.0) * prov.noise_std[s];
        }
    }

    prov.fault_sensors.resize(static_cast<std::size_t>(kFaultSensorCount));
    for (auto& s : prov.fault_sensors) s = static_cast<int>(rng.uniform_int(0, d - 1));
    if (spec.inject_faults) {
        // Indexed assignment: a sensor drawn twice is scaled once.
        std::vector<int> unique = prov.fault_sensors;
        std::sort(unique.begin(), unique.end());
        unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
        const RowRange r = segment_rows(Segment::fault5, k);
        for (const int s : unique) ds.x.col(s).segment(r.begin, r.size()) *= 1.2;
    }

    ds.segments.resize(static_cast<std::size_t>(k));
    for (const auto seg : kAllSegments) {
        const RowRange r = segment_rows(seg, k);
        std::fill(ds.segments.begin() + r.begin, ds.segments.begin() + r.end, seg);
    }
    return ds;
}

Splits render_splits(const SyntheticDataset& ds) {
    const Eigen::Index k = ds.x.rows();
    auto rows = [&](Segment s) {
        const RowRange r = segment_rows(s, k);
        return MatrixRef(ds.x.middleRows(r.begin, r.size()));
    };
    return Splits{rows(Segment::train),
                  rows(Segment::val),
                  rows(Segment::fp),
                  {rows(Segment::fault1), rows(Segment::fault2), rows(Segment::fault3),
                   rows(Segment::fault4), rows(Segment::fault5)}};
}

}  // namespace helm
