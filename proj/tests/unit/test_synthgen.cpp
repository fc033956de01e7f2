#include <gtest/gtest.h>

#include <helm/error.hpp>
#include <helm/synthgen.hpp>

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace helm;

namespace {

SyntheticDataset make(std::uint64_t seed, bool faults = true, Reading reading = Reading::identity,
                      int n = 5) {
    GeneratorSpec spec;
    spec.seed = seed;
    spec.inject_faults = faults;
    spec.reading = reading;
    spec.base_signals = n;
    RngStream rng = dataset_stream(seed, 0);
    return generate(spec, rng);
}

std::vector<double> column(const MatrixRef& m, Eigen::Index j) {
    return std::vector<double>(m.col(j).data(), m.col(j).data() + m.rows());
}

}  // namespace

TEST(Synthgen, ShapeAndLayout) {
    const SyntheticDataset ds = make(1);
    EXPECT_EQ(ds.x.rows(), 14000);
    EXPECT_EQ(ds.x.cols(), 200);
    EXPECT_TRUE(ds.x.allFinite());
    const Splits s = render_splits(ds);
    EXPECT_EQ(s.train.rows(), 7000);
    EXPECT_EQ(s.val.rows(), 1000);
    EXPECT_EQ(s.fp_test.rows(), 1000);
    for (const auto& f : s.fault_tests) EXPECT_EQ(f.rows(), 1000);

    std::vector<int> cover(14000, 0);
    for (const auto seg : kAllSegments) {
        const RowRange r = segment_rows(seg);
        for (Eigen::Index i = r.begin; i < r.end; ++i) ++cover[static_cast<std::size_t>(i)];
    }
    EXPECT_TRUE(std::all_of(cover.begin(), cover.end(), [](int c) { return c == 1; }));
    EXPECT_EQ(segment_rows(Segment::fault5).begin, 13000);
    EXPECT_EQ(ds.segments[7500], Segment::val);
    EXPECT_EQ(ds.segments[13999], Segment::fault5);
}

TEST(Synthgen, SmallerLayoutScales) {
    EXPECT_EQ(segment_rows(Segment::train, 1400).end, 700);
    EXPECT_EQ(segment_rows(Segment::fault3, 1400).begin, 1100);
}

TEST(Synthgen, SameSeedIsBitIdentical) {
    const SyntheticDataset a = make(2), b = make(2), c = make(3);
    EXPECT_EQ(a.x, b.x);
    EXPECT_NE(a.x, c.x);
    EXPECT_EQ(a.provenance.fault_sensors, b.provenance.fault_sensors);
}

TEST(Synthgen, HealthySegmentsDoNotDependOnFaults) {
    const SyntheticDataset a = make(4, true), b = make(4, false);
    const RowRange healthy{0, segment_rows(Segment::fp).end};
    EXPECT_EQ(a.x.topRows(healthy.end), b.x.topRows(healthy.end));
}

TEST(Synthgen, ProvenanceRanges) {
    const Provenance p = make(5).provenance;
    EXPECT_EQ(p.base_gain.size(), 5);
    EXPECT_GE(p.base_offset.minCoeff(), 0.0);
    EXPECT_LE(p.base_offset.maxCoeff(), 3.0);
    EXPECT_GE(p.fault_offset, 0.0);
    EXPECT_LE(p.fault_offset, 3.0);
    EXPECT_GE(p.sensor_gain.minCoeff(), 0.0);
    EXPECT_LE(p.sensor_gain.maxCoeff(), 1.0);
    std::set<int> sources(p.sensor_source.begin(), p.sensor_source.end());
    EXPECT_GE(*sources.begin(), 0);
    EXPECT_LE(*sources.rbegin(), 4);
    EXPECT_EQ(p.fault_sensors.size(), 10u);
    for (int s : p.fault_sensors) {
        EXPECT_GE(s, 0);
        EXPECT_LT(s, 200);
    }
}

TEST(Synthgen, BaseFaultsMatchConstruction) {
    const SyntheticDataset a = make(6, true), b = make(6, false);
    const Provenance& pa = a.provenance;
    const Provenance& pb = b.provenance;
    auto seg = [](const Matrix& m, Segment s, int col) {
        const RowRange r = segment_rows(s);
        return Vector(m.col(col).segment(r.begin, r.size()));
    };
    EXPECT_LT((seg(pa.base, Segment::fault1, 0) - 1.2 * seg(pb.base, Segment::fault1, 0))
                  .cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((seg(pa.base, Segment::fault2, 0) - 1.5 * seg(pb.base, Segment::fault2, 0))
                  .cwiseAbs().maxCoeff(), 1e-12);
    const Vector shift = seg(pa.base, Segment::fault3, 0) - seg(pb.base, Segment::fault3, 0);
    EXPECT_LT((shift.array() - 0.2 * pa.base_gain[0]).abs().maxCoeff(), 1e-12);
    // Fault 4 replaces the signal with an independent one of different law.
    EXPECT_GT((seg(pa.base, Segment::fault4, 0) - seg(pb.base, Segment::fault4, 0))
                  .cwiseAbs().minCoeff(), 0.0);
    // Other base signals are untouched.
    EXPECT_EQ(pa.base.rightCols(4), pb.base.rightCols(4));
}

TEST(Synthgen, FaultFiveScalesExactlyTheDrawnSensors) {
    const SyntheticDataset a = make(7, true), b = make(7, false);
    const RowRange r = segment_rows(Segment::fault5);
    std::set<int> drawn(a.provenance.fault_sensors.begin(), a.provenance.fault_sensors.end());
    for (Eigen::Index s = 0; s < 200; ++s) {
        const Vector fa = a.x.col(s).segment(r.begin, r.size());
        const Vector fb = b.x.col(s).segment(r.begin, r.size());
        if (drawn.count(static_cast<int>(s))) {
            EXPECT_LT((fa - 1.2 * fb).cwiseAbs().maxCoeff(), 1e-12 * fb.cwiseAbs().maxCoeff());
        } else {
            EXPECT_EQ(fa, fb) << "sensor " << s;
        }
    }
}

TEST(Synthgen, NoiseIsOnePercentOfTrainingAmplitude) {
    const SyntheticDataset ds = make(8);
    const Matrix clean = clean_readings(ds.provenance);
    const Splits s = render_splits(ds);
    const Matrix noise = s.train - clean.topRows(7000);
    for (Eigen::Index j = 0; j < 200; ++j) {
        const auto window = clean.col(j).head(7000);
        const double amp = window.maxCoeff() - window.minCoeff();
        EXPECT_DOUBLE_EQ(ds.provenance.noise_std[j], 0.01 * amp);
        const double sd = std::sqrt(oracle::variance(column(noise, j)));
        EXPECT_NEAR(sd, 0.01 * amp, 0.1 * 0.01 * amp) << "sensor " << j;
    }
}

TEST(Synthgen, CleanReadingsHaveRankAtMostN) {
    for (int n : {5, 10}) {
        const SyntheticDataset ds = make(9, true, Reading::identity, n);
        const Matrix clean = clean_readings(ds.provenance).topRows(7000);
        const Matrix centered = clean.rowwise() - clean.colwise().mean();
        const Eigen::SelfAdjointEigenSolver<Matrix> es(centered.transpose() * centered);
        const Vector ev = es.eigenvalues().reverse();
        EXPECT_LT(ev[n] / ev[0], 1e-10) << "n = " << n;
        EXPECT_GT(ev[n - 1] / ev[0], 1e-6) << "n = " << n;
    }
}

TEST(Synthgen, LogReadingIsFlooredLogOfLinearReading) {
    const SyntheticDataset ds = make(10, true, Reading::log);
    const Provenance& p = ds.provenance;
    const Matrix clean = clean_readings(p);
    EXPECT_GE(clean.minCoeff(), std::log(kLogReadingFloor) - 1e-15);
    for (Eigen::Index s : {0, 17, 199}) {
        const int b = p.sensor_source[static_cast<std::size_t>(s)];
        for (Eigen::Index t : {0, 5000, 12000}) {
            const double v = p.sensor_gain[s] * p.base(t, b);
            EXPECT_NEAR(clean(t, s), std::log(std::max(v, kLogReadingFloor)), 1e-15);
        }
    }
}

TEST(Synthgen, FaultTwoMovesOnlySensorsOfFirstSignal) {
    const SyntheticDataset ds = make(11);
    const Splits s = render_splits(ds);
    const auto& src = ds.provenance.sensor_source;
    const double alpha = 0.01 / 200.0;  // Bonferroni over all sensors
    int affected = 0;
    for (Eigen::Index j = 0; j < 200; ++j) {
        const auto healthy = column(s.fp_test, j);
        const auto fault = column(s.fault_tests[1], j);
        const double ratio = oracle::variance(fault) / oracle::variance(healthy);
        if (src[static_cast<std::size_t>(j)] == 0) {
            ++affected;
            // Scaling the signal by 1.5 scales its variance by 2.25.
            EXPECT_GT(ratio, 2.25 / 1.25) << "sensor " << j;
            EXPECT_LT(ratio, 2.25 * 1.25) << "sensor " << j;
        } else {
            EXPECT_GT(oracle::welch_pvalue(healthy, fault), alpha) << "sensor " << j;
            EXPECT_GT(ratio, 0.8) << "sensor " << j;
            EXPECT_LT(ratio, 1.25) << "sensor " << j;
        }
    }
    EXPECT_GT(affected, 0);
}

TEST(Synthgen, ValidationErrors) {
    RngStream rng(1);
    GeneratorSpec spec;
    spec.samples = 1000;
    EXPECT_THROW(generate(spec, rng), InvalidArgument);
    spec = GeneratorSpec{};
    spec.base_signals = 0;
    EXPECT_THROW(generate(spec, rng), InvalidArgument);
    spec = GeneratorSpec{};
    spec.sensors = 0;
    EXPECT_THROW(generate(spec, rng), InvalidArgument);
    EXPECT_THROW(reading_from_string("sqrt"), InvalidArgument);
    EXPECT_EQ(reading_from_string(to_string(Reading::log)), Reading::log);
}
