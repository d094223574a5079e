#include <benchmark/benchmark.h>

#include "polargrass/gensets.hpp"

using namespace polargrass;

static void BM_FieldMul(benchmark::State& state) {
    const Field& F = Field::predefined(9);
    code_t x = 1;
    for (auto _ : state) {
        x = F.mul(x, F.gen());
        x = F.add(x, 1);
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK(BM_FieldMul);

static void BM_Rref2x7(benchmark::State& state) {
    const Field& F = Field::predefined(9);
    std::vector<code_t> rows{1, 3, 0, 2, 5, 0, 7, 0, 1, 4, 0, 6, 2, 1};
    for (auto _ : state) {
        auto buf = rows;
        benchmark::DoNotOptimize(rref_inplace(F, buf.data(), 2, 7));
    }
}
BENCHMARK(BM_Rref2x7);

static void BM_FormEval(benchmark::State& state) {
    auto f = FormSpec::standard("Qparab(3,9)");
    Vec x{1, 2, 3, 4, 5, 6, 7};
    for (auto _ : state) benchmark::DoNotOptimize(f.eval(x.data()));
}
BENCHMARK(BM_FormEval);

static void BM_PointEnumeration(benchmark::State& state) {
    for (auto _ : state) {
        PolarModel m(FormSpec::standard("Qparab(3,3)"));
        benchmark::DoNotOptimize(m.num_points());
    }
}
BENCHMARK(BM_PointEnumeration);

static void BM_LineTable(benchmark::State& state) {
    for (auto _ : state) {
        PolarModel m(FormSpec::standard("Qparab(3,3)"));
        benchmark::DoNotOptimize(m.sk(2).size());
    }
}
BENCHMARK(BM_LineTable);

static void BM_Closure(benchmark::State& state) {
    PolarModel m(FormSpec::standard("Qparab(3,4)"));
    Geometry g = build_grassmannian(m, 2);
    SubfieldContext ctx = make_subfield_context(m, 1);
    for (auto _ : state) {
        ClosureResult cl = span_closure(g, ctx.rational_lines);
        benchmark::DoNotOptimize(cl.closed_count);
    }
    state.counters["points"] = static_cast<double>(g.num_points);
    state.counters["lines"] = static_cast<double>(g.num_lines());
}
BENCHMARK(BM_Closure);

static void BM_PluckerRank(benchmark::State& state) {
    PolarModel m(FormSpec::standard("Qparab(3,3)"));
    m.sk(2);
    for (auto _ : state) {
        PluckerCertificate c = plucker_rank_table(m, 2);
        benchmark::DoNotOptimize(c.rank);
    }
}
BENCHMARK(BM_PluckerRank);

BENCHMARK_MAIN();
