#include "helm/core_types.hpp"

#include "helm/error.hpp"

#include <cmath>
#include <string>

namespace helm {

void require_finite(const MatrixRef& m, std::string_view what) {
    if (!m.allFinite()) {
        throw NumericalError(std::string(what) + ": non-finite entry");
    }
}

void require_nonempty(const MatrixRef& m, std::string_view what) {
    if (m.rows() == 0 || m.cols() == 0) {
        throw InvalidArgument(std::string(what) + ": empty input");
    }
}

NormalizationStats fit_normalization(const MatrixRef& x_train) {
    require_nonempty(x_train, "fit_normalization");
    if (x_train.rows() < 2) {
        throw InvalidArgument("fit_normalization: need at least 2 samples");
    }
    require_finite(x_train, "fit_normalization");

    NormalizationStats stats;
    stats.mean = x_train.colwise().mean().transpose();
    stats.std.resize(x_train.cols());
    const double denom = static_cast<double>(x_train.rows());
    for (Eigen::Index j = 0; j < x_train.cols(); ++j) {
        const double var = (x_train.col(j).array() - stats.mean[j]).square().sum() / denom;
        const double sd = std::sqrt(var);
        stats.std[j] = sd < kConstantColumnStd ? 1.0 : sd;
    }
    return stats;
}

namespace {

void check_stats(const MatrixRef& x, const NormalizationStats& stats) {
    if (x.cols() != stats.dimension() || stats.std.size() != stats.dimension()) {
        throw DimensionError("normalization: data has " + std::to_string(x.cols()) +
                             " columns, statistics have " +
                             std::to_string(stats.dimension()));
    }
}

}  // namespace

SensorMatrix apply_normalization(const MatrixRef& x, const NormalizationStats& stats) {
    check_stats(x, stats);
    return (x.rowwise() - stats.mean.transpose()).array().rowwise() /
           stats.std.transpose().array();
}

SensorMatrix invert_normalization(const MatrixRef& z, const NormalizationStats& stats) {
    check_stats(z, stats);
    Matrix x = z.array().rowwise() * stats.std.transpose().array();
    x.rowwise() += stats.mean.transpose();
    return x;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(seeded_engine(seed, stream_id)) {}

RngStream RngStream::child(std::uint64_t tag) const {
    return RngStream(seed_, splitmix64(stream_id_ ^ splitmix64(tag)));
}

double RngStream::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double RngStream::normal(double mean, double stddev) {
    return mean + stddev * standard_normal_(engine_);
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
}

Matrix RngStream::uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi) {
    Matrix m(rows, cols);
    std::uniform_real_distribution<double> dist(lo, hi);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = dist(engine_);
        }
    }
    return m;
}

}  // namespace helm
