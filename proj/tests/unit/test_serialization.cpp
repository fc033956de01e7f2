#include <gtest/gtest.h>

#include <helm/csv.hpp>
#include <helm/detector.hpp>
#include <helm/error.hpp>
#include <helm/serialization.hpp>
#include <helm/synthgen.hpp>

#include <cstring>
#include <filesystem>

using namespace helm;

namespace {

const SyntheticDataset& dataset() {
    static const SyntheticDataset ds = [] {
        GeneratorSpec spec;
        spec.samples = 1400;
        spec.sensors = 30;
        RngStream rng = dataset_stream(3, 0);
        return generate(spec, rng);
    }();
    return ds;
}

bool bit_equal(const Vector& a, const Vector& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST(Serialization, ModelRoundTripGivesIdenticalOutputs) {
    const Splits s = render_splits(dataset());
    for (ModelKind kind : {ModelKind::helm, ModelKind::elm, ModelKind::pca_elm}) {
        ModelConfig cfg;
        cfg.kind = kind;
        cfg.helm.ensemble_size = 2;
        cfg.helm.ae_sizes = kind == ModelKind::helm ? std::vector<Eigen::Index>{8, 6}
                                                    : std::vector<Eigen::Index>{};
        cfg.helm.top_size = 25;
        cfg.pca_components = 4;
        StoredModel m;
        m.ensemble = train_ensemble(s.train, cfg, model_stream(1, 0, kind));
        m.input_columns = default_column_names(30);
        m.detector = calibrate(run_ensemble(m.ensemble, s.val), 1.7);

        const StoredModel back = model_from_json(model_to_json(m));
        EXPECT_EQ(back.ensemble.config.kind, kind);
        EXPECT_EQ(back.input_columns, m.input_columns);
        ASSERT_TRUE(back.detector.has_value());
        EXPECT_EQ(back.detector->threshold, m.detector->threshold);
        EXPECT_EQ(back.detector->gamma, 1.7);
        EXPECT_TRUE(bit_equal(run_ensemble(back.ensemble, s.fault_tests[4]),
                              run_ensemble(m.ensemble, s.fault_tests[4])))
            << to_string(kind);
        EXPECT_EQ(model_to_json(back), model_to_json(m));
    }
}

TEST(Serialization, FileRoundTrip) {
    const Splits s = render_splits(dataset());
    ModelConfig cfg;
    cfg.helm.ensemble_size = 1;
    StoredModel m;
    m.ensemble = train_ensemble(s.train, cfg, model_stream(2, 0, ModelKind::helm));
    m.input_columns = default_column_names(30);
    const auto path = std::filesystem::temp_directory_path() / "helm_serialization_test.json";
    save_model(path, m);
    const StoredModel back = load_model(path);
    std::filesystem::remove(path);
    EXPECT_FALSE(back.detector.has_value());
    EXPECT_TRUE(bit_equal(run_ensemble(back.ensemble, s.val), run_ensemble(m.ensemble, s.val)));
}

TEST(Serialization, ProvenanceRoundTrip) {
    const Provenance& p = dataset().provenance;
    const Provenance back = provenance_from_json(provenance_to_json(p));
    EXPECT_EQ(back.spec.samples, p.spec.samples);
    EXPECT_EQ(back.spec.seed, p.spec.seed);
    EXPECT_EQ(back.base_gain, p.base_gain);
    EXPECT_EQ(back.sensor_source, p.sensor_source);
    EXPECT_EQ(back.fault_sensors, p.fault_sensors);
    EXPECT_EQ(back.noise_std, p.noise_std);
    EXPECT_EQ(back.base, p.base);
    EXPECT_EQ(clean_readings(back), clean_readings(p));
}

TEST(Serialization, MalformedInputIsParseError) {
    EXPECT_THROW(model_from_json("{not json"), ParseError);
    EXPECT_THROW(model_from_json(R"({"format": "something-else", "version": 1})"), ParseError);
    EXPECT_THROW(load_model("/nonexistent/model.json"), IoError);
}
