#include <gtest/gtest.h>

#include <map>
#include <set>

#include "contra/frontend/parser.hpp"
#include "contra/pipeline/dataset.hpp"
#include "contra/synth/generator.hpp"

using namespace contra;

TEST(Synth, FullCorpusParsesAndIsLabelled) {
  synth::SynthOptions o;
  const auto samples = synth::generate_corpus(o);
  ASSERT_EQ(samples.size(), 2000u);
  std::map<int, std::size_t> per_cluster;
  std::set<std::string> ids;
  for (const auto& s : samples) {
    ASSERT_TRUE(s.cluster);
    ++per_cluster[*s.cluster];
    EXPECT_TRUE(ids.insert(s.id).second);
    EXPECT_EQ(s.lang, "c");
    EXPECT_FALSE(s.comment.empty());
    const auto fn = frontend::parse_function(s.code);
    EXPECT_FALSE(frontend::variables(fn).empty());
  }
  EXPECT_EQ(per_cluster.size(), 100u);
  for (const auto& [c, n] : per_cluster) EXPECT_EQ(n, 20u);
}

TEST(Synth, DeterministicPerSeed) {
  synth::SynthOptions o;
  o.clusters = 10;
  o.per_cluster = 5;
  o.seed = 4;
  EXPECT_EQ(synth::generate_corpus(o), synth::generate_corpus(o));
  auto p = o;
  p.seed = 5;
  EXPECT_NE(synth::generate_corpus(o), synth::generate_corpus(p));
}

TEST(Synth, ClusterMembersDiffer) {
  synth::SynthOptions o;
  o.clusters = 3;
  o.per_cluster = 20;
  const auto samples = synth::generate_corpus(o);
  std::set<std::string> codes;
  for (const auto& s : samples) codes.insert(s.code);
  EXPECT_GT(codes.size(), 50u);
}

TEST(Synth, TaskDescriptionsAreDistinct) {
  std::set<std::string> d;
  for (std::size_t c = 0; c < synth::kTaskCount; ++c) d.insert(synth::task_description(c));
  EXPECT_EQ(d.size(), synth::kTaskCount);
}

TEST(Synth, TooManyClustersRejected) {
  synth::SynthOptions o;
  o.clusters = synth::kTaskCount + 1;
  EXPECT_THROW(synth::generate_corpus(o), std::invalid_argument);
}
