// Copyright 2026 The cssim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <set>

#include "cssim/adversary.hpp"
#include "cssim/corpus.hpp"
#include "cssim/cuckoo.hpp"
#include "cssim/psi.hpp"
#include "cssim/rs_decode.hpp"
#include "cssim/simulation.hpp"

namespace cssim {
namespace {

void BM_Fingerprint(benchmark::State& state) {
  const Image img = generate_image(1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_fingerprint(img));
}
BENCHMARK(BM_Fingerprint)->Arg(64)->Arg(512);

void BM_CuckooBuild(benchmark::State& state) {
  Rng rng(2);
  std::set<Fingerprint> keys;
  while (keys.size() < static_cast<std::size_t>(state.range(0))) keys.insert({rng.next_u64()});
  std::vector<KeyedEntry> entries;
  for (const auto& k : keys) entries.push_back({k, {k.bits}});
  const uint64_t m = table_size_for_load(entries.size(), 0.45);
  for (auto _ : state) benchmark::DoNotOptimize(build_with_reseed(entries, m, 3));
}
BENCHMARK(BM_CuckooBuild)->Arg(1000)->Arg(10'000);

struct PsiFixture {
  ServerKeys keys;
  PublishedDb pub;
  std::vector<Fingerprint> fps;
};

PsiFixture psi_fixture(const Group& group) {
  Rng rng(4);
  ServerKeys keys = ServerKeys::generate(group, kPrime61, rng);
  std::vector<Fingerprint> fps;
  for (int i = 0; i < 1000; ++i) fps.push_back({rng.next_u64()});
  PublishedDb pub = publish_blinded_db(keys, fps).published(keys);
  return {std::move(keys), std::move(pub), std::move(fps)};
}

void BM_ClientEncode(benchmark::State& state) {
  const PsiFixture f = psi_fixture(Group::run());
  Rng rng(5);
  ClientAccount acct{1, AccountSecret::generate(kPrime61, 10, rng)};
  const VisualDerivative d{};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(client_encode(f.fps[i++ % f.fps.size()], d, acct, f.pub, rng));
}
BENCHMARK(BM_ClientEncode);

void BM_ServerProcess(benchmark::State& state) {
  const PsiFixture f = psi_fixture(Group::run());
  Rng rng(6);
  ClientAccount acct{1, AccountSecret::generate(kPrime61, 10, rng)};
  std::vector<Voucher> vs;
  for (int i = 0; i < 256; ++i) vs.push_back(client_encode(f.fps[i], VisualDerivative{}, acct, f.pub, rng));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(server_process_voucher(f.keys, vs[i++ % vs.size()]));
}
BENCHMARK(BM_ServerProcess);

void BM_BwDecode(benchmark::State& state) {
  const int t = 10;
  const int n = static_cast<int>(state.range(0));
  Rng rng(7);
  AccountSecret secret = AccountSecret::generate(kPrime61, t, rng);
  NoisyShareSet s{{}, t, decoding_radius(n, t)};
  const int noise = s.e_max;
  for (int i = 0; i < n - noise; ++i) {
    s.shares.push_back(deal_share(secret, FieldElement(next_unused_x(secret.used_xs(), kPrime61), kPrime61)));
  }
  for (int i = 0; i < noise; ++i) s.shares.push_back(deal_synthetic(rng, secret));
  for (auto _ : state) benchmark::DoNotOptimize(bw_decode(s));
}
BENCHMARK(BM_BwDecode)->Arg(20)->Arg(40);

void BM_Evade(benchmark::State& state) {
  const Image img = generate_image(8, 512);
  Rng rng(9);
  for (auto _ : state) benchmark::DoNotOptimize(evade(img, AttackBudget::defaults_for(img), rng));
}
BENCHMARK(BM_Evade)->Unit(benchmark::kMillisecond);

void BM_Collide(benchmark::State& state) {
  const Image img = generate_image(10, 512);
  Rng rng(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(collide(img, Fingerprint{rng.next_u64()}, AttackBudget::defaults_for(img)));
  }
}
BENCHMARK(BM_Collide)->Unit(benchmark::kMillisecond);

void BM_DemoSimulation(benchmark::State& state) {
  SimulationConfig cfg;
  cfg.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation(cfg));
}
BENCHMARK(BM_DemoSimulation)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace cssim

BENCHMARK_MAIN();
