#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "lbridge/demo/person.hpp"
#include "lbridge/lbridge.hpp"

using namespace lbridge;

namespace {

// Balanced binary tree of f/2 with `depth` levels; leaves alternate a/X.
Term tree(int depth, bool with_vars, int& counter) {
  if (depth == 0) {
    ++counter;
    return with_vars && counter % 2 ? Term::var("V" + std::to_string(counter)) : Term::atom("a");
  }
  Term l = tree(depth - 1, with_vars, counter);
  Term r = tree(depth - 1, with_vars, counter);
  return Term::compound("f", {l, r});
}

void BM_unify_trees(benchmark::State& state) {
  int c1 = 0, c2 = 0;
  Term a = tree(static_cast<int>(state.range(0)), true, c1);
  Term b = tree(static_cast<int>(state.range(0)), false, c2);
  for (auto _ : state) {
    auto s = unify(a, b, {}, nullptr);
    benchmark::DoNotOptimize(s);
  }
  state.SetComplexityN(c1);
}
BENCHMARK(BM_unify_trees)->DenseRange(4, 12, 4)->Complexity();

void BM_parse_program(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i)
    text += "edge(n" + std::to_string(i) + ", n" + std::to_string(i + 1) + ").\npath(X, Y) :- edge(X, Z), path(Z, Y).\n";
  for (auto _ : state) {
    auto clauses = parse_program(text);
    benchmark::DoNotOptimize(clauses);
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_parse_program)->Range(16, 1024);

void BM_member_resolution(benchmark::State& state) {
  Engine engine(RefRegistry::create());
  engine.consult_text("member(X, [X|_]).\nmember(X, [_|T]) :- member(X, T).\n");
  std::vector<Term> items;
  for (int i = 0; i < state.range(0); ++i) items.push_back(Term::integer(i));
  Term goal = Term::compound("member", {Term::var("E"), Term::list(items)});
  for (auto _ : state) {
    std::size_t n = engine.query(goal).all_solutions().size();
    benchmark::DoNotOptimize(n);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_member_resolution)->Range(8, 512);

void BM_reference_unification(benchmark::State& state) {
  auto registry = RefRegistry::create();
  demo::install_person_support(*registry);
  Engine engine(registry);
  std::vector<Object> people;
  for (int i = 0; i < state.range(0); ++i) {
    people.push_back(Object::make<demo::Person>("p" + std::to_string(i)));
    engine.assertz(Term::compound("student", {registry->make_jref(people.back())}));
  }
  Term goal = Term::compound("student", {registry->make_jref(Object::make<demo::Person>("P0"))});
  for (auto _ : state) {
    std::size_t n = engine.query(goal).all_solutions().size();
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_reference_unification)->Range(8, 1024);

void BM_collection_pass(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  for (auto _ : state) {
    state.PauseTiming();
    auto registry = RefRegistry::create();
    std::vector<Object> held;
    for (std::size_t i = 0; i < n; ++i) {
      Object o = Object::make<demo::Person>("p");
      registry->make_jref(o, i % 3 == 0 ? Strength::soft : Strength::weak);
      if (rng() % 2) held.push_back(o);
    }
    state.ResumeTiming();
    auto result = registry->run_collection_pass(true);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_collection_pass)->Range(64, 8192);

}  // namespace

BENCHMARK_MAIN();
