#include <gtest/gtest.h>

#include "corpus.hpp"
#include "oracles.hpp"

using namespace sramsey;
namespace cat = sramsey::catalog;

namespace {

const std::vector<std::pair<std::string, Certificate>>& serial_corpus() {
  static const auto c = corpus::build(1);
  return c;
}

Certificate by_name(const std::string& name) {
  for (const auto& [n, c] : serial_corpus())
    if (n == name) return c;
  throw std::runtime_error("no corpus entry " + name);
}

}  // namespace

TEST(Certificates, EveryKindIsPresent) {
  std::set<std::string> kinds;
  for (const auto& [n, c] : serial_corpus()) kinds.insert(c.kind);
  for (const char* k : {"arrows", "witness", "degree", "joint-degree", "ecrp", "expansions", "vanthe", "window-expansion",
                        "flow-window", "orbit-system", "class", "limit"})
    EXPECT_TRUE(kinds.count(k)) << k;
}

TEST(Certificates, TextRoundTripIsExact) {
  for (const auto& [name, c] : serial_corpus()) {
    auto text = to_string(c);
    auto back = parse_certificate(text);
    EXPECT_EQ(to_string(back), text) << name;
    for (const auto& s : back.structures) {
      const auto& orig = c.structure(s.name);
      EXPECT_EQ(canonical_form(s.structure).form, canonical_form(orig).form) << name << " " << s.name;
    }
  }
}

TEST(Certificates, AllReverify) {
  for (const auto& [name, c] : serial_corpus()) {
    auto r = verify_certificate(parse_certificate(to_string(c)), corpus::resolve);
    EXPECT_TRUE(r.ok) << name << ": " << r.message;
  }
}

TEST(Certificates, IdenticalAcrossWorkerCounts) {
  for (int w : {4, 8}) {
    auto other = corpus::build(w);
    ASSERT_EQ(other.size(), serial_corpus().size());
    for (std::size_t i = 0; i < other.size(); ++i)
      EXPECT_EQ(to_string(other[i].second), to_string(serial_corpus()[i].second)) << other[i].first << " @" << w;
  }
}

TEST(Certificates, FlippedColourIsRejected) {
  auto c = by_name("arrows-5-chain");
  ASSERT_EQ(c.verdict, "no");
  for (auto& [k, v] : c.data)
    if (k == "coloring") v[3] = v[3] == "0" ? "1" : "0";
  auto r = verify_certificate(c, corpus::resolve);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.message.find("B-copy"), std::string::npos) << r.message;
}

TEST(Certificates, FlippedVerdictIsRejected) {
  auto yes = by_name("arrows-5-chain");
  yes.verdict = "yes";
  EXPECT_FALSE(verify_certificate(yes, corpus::resolve).ok);
  auto no = by_name("arrows-6-chain");
  no.verdict = "no";
  no.add_ints("coloring", std::vector<int>(15, 0));
  EXPECT_FALSE(verify_certificate(no, corpus::resolve).ok);
}

TEST(Certificates, TamperedEcrpWitnessIsRejected) {
  auto c = by_name("ecrp-yes");
  bool changed = false;
  for (auto& [k, v] : c.data)
    if (k == "witness" && !changed && v.size() >= 2) {
      v[1] = v[1].substr(0, v[1].find(':')) + ":1/2";
      changed = true;
    }
  ASSERT_TRUE(changed);
  EXPECT_FALSE(verify_certificate(c, corpus::resolve).ok);
}

TEST(Certificates, TamperedFarkasIsRejected) {
  auto c = by_name("ecrp-no");
  for (auto& [k, v] : c.data)
    if (k == "farkas-le")
      for (auto& x : v) x = "0/1";
  EXPECT_FALSE(verify_certificate(c, corpus::resolve).ok);
}

TEST(Certificates, TamperedExpansionCountIsRejected) {
  auto c = by_name("expansions-p3");
  for (auto& [k, v] : c.params)
    if (k == "count") v = "2";
  EXPECT_FALSE(verify_certificate(c, corpus::resolve).ok);
}

TEST(Certificates, TamperedFlowPointIsRejected) {
  auto c = by_name("flow-3");
  ASSERT_GE(c.structures.size(), 3u);
  auto& last = c.structures.back();
  last.structure = c.structures[c.structures.size() - 2].structure;
  EXPECT_FALSE(verify_certificate(c, corpus::resolve).ok);
}

TEST(Certificates, TamperedOrbitBondingIsRejected) {
  auto c = by_name("orbit");
  bool changed = false;
  for (auto& [k, v] : c.data)
    if (k == "bonding" && !changed) {
      auto& x = v.back();
      x = x == "0" ? "1" : "0";
      changed = true;
    }
  ASSERT_TRUE(changed);
  EXPECT_FALSE(verify_certificate(c, corpus::resolve).ok);
}

TEST(Certificates, ClassVerdictFlipIsRejected) {
  auto c = by_name("class-fixture");
  ASSERT_EQ(c.verdict, "no");
  c.verdict = "yes";
  EXPECT_FALSE(verify_certificate(c, corpus::resolve).ok);
}

TEST(Certificates, LimitFailureReplays) {
  auto c = by_name("limit-fixture");
  EXPECT_EQ(c.verdict, "no");
  EXPECT_TRUE(verify_certificate(c, corpus::resolve).ok);
  auto lie = by_name("limit-linorder");
  lie.verdict = "no";
  EXPECT_FALSE(verify_certificate(lie, corpus::resolve).ok);
}

TEST(Certificates, MalformedInputIsAParseError) {
  EXPECT_THROW(parse_certificate("certificate arrows\nverdict maybe\nend-certificate\n"), ParseError);
  EXPECT_THROW(parse_certificate("certificate arrows\nparam colors 2\nend-certificate\n"), ParseError);
  EXPECT_THROW(parse_certificate("cert arrows\n"), ParseError);
  auto c = parse_certificate("certificate arrows\nparam colors 2\nparam k 1\nverdict no\nend-certificate\n");
  EXPECT_THROW(verify_certificate(c, corpus::resolve), ParseError);
}
