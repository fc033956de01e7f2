#include <benchmark/benchmark.h>

#include <helm/elm.hpp>
#include <helm/fista.hpp>
#include <helm/helm.hpp>
#include <helm/synthgen.hpp>

namespace {

helm::Matrix sigmoid_features(Eigen::Index k, Eigen::Index l, Eigen::Index d, helm::Matrix& x) {
    helm::RngStream rng(11, 0);
    x = rng.uniform_matrix(k, d, -1.0, 1.0);
    const helm::ElmLayer layer = helm::random_layer(d, l, helm::Activation::sigmoid, rng);
    return helm::hidden(layer, x);
}

void BM_FistaAutoencoder(benchmark::State& state) {
    const auto k = static_cast<Eigen::Index>(state.range(0));
    helm::Matrix x;
    const helm::Matrix h = sigmoid_features(k, 20, 200, x);
    helm::FistaParams params;
    for (auto _ : state) {
        auto r = helm::fista_solve(h, x, params);
        benchmark::DoNotOptimize(r.beta.data());
    }
}
BENCHMARK(BM_FistaAutoencoder)->Arg(1000)->Arg(7000)->Unit(benchmark::kMillisecond);

void BM_RidgeOneClass(benchmark::State& state) {
    const auto l = static_cast<Eigen::Index>(state.range(0));
    helm::Matrix x;
    const helm::Matrix h = sigmoid_features(7000, l, 20, x);
    const helm::Matrix t = helm::Matrix::Ones(h.rows(), 1);
    for (auto _ : state) {
        auto beta = helm::ridge_solve(h, t, 1e-5);
        benchmark::DoNotOptimize(beta.data());
    }
}
BENCHMARK(BM_RidgeOneClass)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_HelmTrain(benchmark::State& state) {
    helm::GeneratorSpec spec;
    helm::RngStream data_rng = helm::dataset_stream(3, 0);
    const auto ds = helm::generate(spec, data_rng);
    const auto splits = helm::render_splits(ds);
    helm::HelmConfig config;
    for (auto _ : state) {
        helm::RngStream rng(3, 1);
        auto model = helm::helm_train(splits.train, config, rng);
        benchmark::DoNotOptimize(model.top.bias.data());
    }
}
BENCHMARK(BM_HelmTrain)->Unit(benchmark::kMillisecond);

void BM_Generate(benchmark::State& state) {
    helm::GeneratorSpec spec;
    for (auto _ : state) {
        helm::RngStream rng = helm::dataset_stream(5, 0);
        auto ds = helm::generate(spec, rng);
        benchmark::DoNotOptimize(ds.x.data());
    }
}
BENCHMARK(BM_Generate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
