#include "helm/serialization.hpp"

#include "helm/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace helm {

using nlohmann::json;

namespace {

constexpr const char* kModelFormat = "helm-detector";

json matrix_to_json(const Matrix& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols) {
        throw ParseError("model: matrix data has the wrong length", 0, 0);
    }
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j2 = 0; j2 < cols; ++j2) m(i, j2) = data[k++].get<double>();
    }
    return m;
}

json vector_to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vector_from_json(const json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json config_to_json(const HelmConfig& c) {
    return {{"ae_sizes", c.ae_sizes},
            {"top_size", c.top_size},
            {"lambda", c.lambda},
            {"c", c.c},
            {"ensemble_size", c.ensemble_size},
            {"seed", c.seed},
            {"activation", std::string(to_string(c.activation))},
            {"fista_delta", c.fista_delta},
            {"fista_epsilon", c.fista_epsilon},
            {"fista_max_iter", c.fista_max_iter}};
}

HelmConfig config_from_json(const json& j) {
    HelmConfig c;
    c.ae_sizes = j.at("ae_sizes").get<std::vector<Eigen::Index>>();
    c.top_size = j.at("top_size").get<Eigen::Index>();
    c.lambda = j.at("lambda").get<double>();
    c.c = j.at("c").get<double>();
    c.ensemble_size = j.at("ensemble_size").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.activation = activation_from_string(j.at("activation").get<std::string>());
    c.fista_delta = j.at("fista_delta").get<double>();
    c.fista_epsilon = j.at("fista_epsilon").get<double>();
    c.fista_max_iter = j.at("fista_max_iter").get<int>();
    return c;
}

json norm_to_json(const NormalizationStats& s) {
    return {{"mean", vector_to_json(s.mean)}, {"std", vector_to_json(s.std)}};
}

NormalizationStats norm_from_json(const json& j) {
    NormalizationStats s;
    s.mean = vector_from_json(j.at("mean"));
    s.std = vector_from_json(j.at("std"));
    if (s.mean.size() != s.std.size()) throw ParseError("model: normalization size mismatch", 0, 0);
    return s;
}

json layer_to_json(const ElmLayer& layer) {
    json j = {{"activation", std::string(to_string(layer.activation))},
              {"input_weights", matrix_to_json(layer.input_weights)},
              {"bias", vector_to_json(layer.bias)}};
    if (layer.output_weights) j["output_weights"] = matrix_to_json(*layer.output_weights);
    return j;
}

ElmLayer layer_from_json(const json& j) {
    ElmLayer layer;
    layer.activation = activation_from_string(j.at("activation").get<std::string>());
    layer.input_weights = matrix_from_json(j.at("input_weights"));
    layer.bias = vector_from_json(j.at("bias"));
    if (j.contains("output_weights")) layer.output_weights = matrix_from_json(j["output_weights"]);
    if (layer.bias.size() != layer.input_weights.cols()) {
        throw ParseError("model: bias length does not match the layer width", 0, 0);
    }
    return layer;
}

json member_to_json(const EnsembleMember& member) {
    struct Writer {
        json operator()(const HelmModel& m) const {
            json betas = json::array();
            for (const auto& b : m.ae_betas) betas.push_back(matrix_to_json(b));
            return {{"normalization", norm_to_json(m.norm)},
                    {"ae_betas", std::move(betas)},
                    {"top", layer_to_json(m.top)}};
        }
        json operator()(const PcaElmModel& m) const {
            return {{"normalization", norm_to_json(m.norm)},
                    {"pca",
                     {{"components", matrix_to_json(m.pca.components)},
                      {"explained_variance", vector_to_json(m.pca.explained_variance)},
                      {"mean", vector_to_json(m.pca.mean)},
                      {"total_variance", m.pca.total_variance}}},
                    {"requested_components", m.requested_components},
                    {"top", layer_to_json(m.top)}};
        }
    };
    return std::visit(Writer{}, member);
}

EnsembleMember member_from_json(const json& j, const ModelConfig& config) {
    if (config.kind == ModelKind::pca_elm) {
        PcaElmModel m;
        m.norm = norm_from_json(j.at("normalization"));
        const auto& p = j.at("pca");
        m.pca.components = matrix_from_json(p.at("components"));
        m.pca.explained_variance = vector_from_json(p.at("explained_variance"));
        m.pca.mean = vector_from_json(p.at("mean"));
        m.pca.total_variance = p.at("total_variance").get<double>();
        m.requested_components = j.at("requested_components").get<Eigen::Index>();
        m.top = layer_from_json(j.at("top"));
        m.config = config.helm;
        m.config.ae_sizes.clear();
        return m;
    }
    HelmModel m;
    m.norm = norm_from_json(j.at("normalization"));
    for (const auto& b : j.at("ae_betas")) m.ae_betas.push_back(matrix_from_json(b));
    m.top = layer_from_json(j.at("top"));
    m.config = config.helm;
    if (config.kind == ModelKind::elm) m.config.ae_sizes.clear();
    return m;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename Fn>
auto parse_guard(Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw ParseError(std::string("json: ") + e.what(), 0, 0);
    }
}

}  // namespace

std::string model_to_json(const StoredModel& model) {
    json members = json::array();
    for (const auto& m : model.ensemble.members) members.push_back(member_to_json(m));
    json doc = {{"format", kModelFormat},
                {"version", kModelFormatVersion},
                {"model",
                 {{"kind", std::string(to_string(model.ensemble.config.kind))},
                  {"pca_components", model.ensemble.config.pca_components},
                  {"config", config_to_json(model.ensemble.config.helm)}}},
                {"input_columns", model.input_columns},
                {"members", std::move(members)}};
    if (model.detector) {
        doc["detector"] = {{"gamma", model.detector->gamma},
                           {"p", model.detector->p},
                           {"threshold", model.detector->threshold}};
    }
    return doc.dump(1);
}

StoredModel model_from_json(const std::string& text) {
    return parse_guard([&] {
        const json doc = json::parse(text);
        if (doc.at("format").get<std::string>() != kModelFormat) {
            throw ParseError("model: not a helm-detector document", 0, 0);
        }
        const int version = doc.at("version").get<int>();
        if (version != kModelFormatVersion) {
            throw ParseError("model: unsupported format version " + std::to_string(version), 0, 0);
        }
        StoredModel model;
        const auto& m = doc.at("model");
        model.ensemble.config.kind = model_kind_from_string(m.at("kind").get<std::string>());
        model.ensemble.config.pca_components = m.at("pca_components").get<Eigen::Index>();
        model.ensemble.config.helm = config_from_json(m.at("config"));
        model.input_columns = doc.at("input_columns").get<std::vector<std::string>>();
        for (const auto& member : doc.at("members")) {
            model.ensemble.members.push_back(member_from_json(member, model.ensemble.config));
        }
        if (doc.contains("detector")) {
            const auto& d = doc["detector"];
            model.detector = DetectorConfig{d.at("gamma").get<double>(), d.at("p").get<double>(),
                                            d.at("threshold").get<double>()};
        }
        return model;
    });
}

void save_model(const std::filesystem::path& path, const StoredModel& model) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << model_to_json(model) << '\n';
    if (!out) throw IoError("write failed: '" + path.string() + "'");
}

StoredModel load_model(const std::filesystem::path& path) {
    return model_from_json(read_text(path));
}

std::string provenance_to_json(const Provenance& p) {
    json windows = json::object();
    for (const auto seg : kAllSegments) {
        const RowRange r = segment_rows(seg, p.spec.samples);
        windows[std::string(to_string(seg))] = {r.begin, r.end};
    }
    json doc = {{"format", "helm-synthetic-provenance"},
                {"version", 1},
                {"spec",
                 {{"samples", p.spec.samples},
                  {"sensors", p.spec.sensors},
                  {"base_signals", p.spec.base_signals},
                  {"reading", std::string(to_string(p.spec.reading))},
                  {"seed", p.spec.seed},
                  {"inject_faults", p.spec.inject_faults}}},
                {"stream_id", p.stream_id},
                {"segments", std::move(windows)},
                {"base_gain", vector_to_json(p.base_gain)},
                {"base_offset", vector_to_json(p.base_offset)},
                {"fault_gain", p.fault_gain},
                {"fault_offset", p.fault_offset},
                {"sensor_gain", vector_to_json(p.sensor_gain)},
                {"sensor_source", p.sensor_source},
                {"noise_std", vector_to_json(p.noise_std)},
                {"fault_sensors", p.fault_sensors},
                {"base", matrix_to_json(p.base)}};
    return doc.dump(1);
}

Provenance provenance_from_json(const std::string& text) {
    return parse_guard([&] {
        const json doc = json::parse(text);
        if (doc.at("format").get<std::string>() != "helm-synthetic-provenance") {
            throw ParseError("provenance: unexpected document format", 0, 0);
        }
        Provenance p;
        const auto& s = doc.at("spec");
        p.spec.samples = s.at("samples").get<Eigen::Index>();
        p.spec.sensors = s.at("sensors").get<Eigen::Index>();
        p.spec.base_signals = s.at("base_signals").get<int>();
        p.spec.reading = reading_from_string(s.at("reading").get<std::string>());
        p.spec.seed = s.at("seed").get<std::uint64_t>();
        p.spec.inject_faults = s.at("inject_faults").get<bool>();
        p.stream_id = doc.at("stream_id").get<std::uint64_t>();
        p.base_gain = vector_from_json(doc.at("base_gain"));
        p.base_offset = vector_from_json(doc.at("base_offset"));
        p.fault_gain = doc.at("fault_gain").get<double>();
        p.fault_offset = doc.at("fault_offset").get<double>();
        p.sensor_gain = vector_from_json(doc.at("sensor_gain"));
        p.sensor_source = doc.at("sensor_source").get<std::vector<int>>();
        p.noise_std = vector_from_json(doc.at("noise_std"));
        p.fault_sensors = doc.at("fault_sensors").get<std::vector<int>>();
        p.base = matrix_from_json(doc.at("base"));
        return p;
    });
}

}  // namespace helm
