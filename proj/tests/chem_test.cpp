// Copyright 2026 The molbo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "molbo/chem/canon.hpp"
#include "molbo/chem/element.hpp"
#include "molbo/chem/fingerprint.hpp"
#include "molbo/chem/molecule.hpp"
#include "molbo/chem/smiles.hpp"
#include "molbo/error.hpp"
#include "molbo/rng.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

namespace molbo::chem {
namespace {

using testing::kCelecoxibAnalogue;
using testing::kCelecoxibAromatic;
using testing::kCelecoxibKekule;
using testing::kIcosane;
using testing::kPentane;

Molecule Shuffled(const Molecule& mol, Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(mol.NumAtoms()));
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.UniformIndex(i)]);
  }
  return mol.Permuted(perm);
}

std::vector<std::string> FullCorpus() {
  auto c = testing::SmallCorpus();
  c.insert(c.end(), {kPentane, kIcosane, kCelecoxibKekule, kCelecoxibAromatic, kCelecoxibAnalogue});
  return c;
}

TEST(ParseSmiles, Pentane) {
  const auto m = ParseSmiles(kPentane);
  EXPECT_EQ(HeavyAtomCount(m), 5);
  EXPECT_EQ(FormatFormula(MolecularFormula(m)), "C5H12");
}

TEST(ParseSmiles, Icosane) {
  const auto f = MolecularFormula(ParseSmiles(kIcosane));
  EXPECT_EQ(f.at("C"), 20);
  EXPECT_EQ(f.at("H"), 42);
}

TEST(ParseSmiles, Celecoxib) {
  const auto m = ParseSmiles(kCelecoxibKekule);
  EXPECT_EQ(HeavyAtomCount(m), 26);
  EXPECT_EQ(FormatFormula(MolecularFormula(m)), "C17H14F3N3O2S");
  const Formula want = {{"C", 17}, {"H", 14}, {"F", 3}, {"N", 3}, {"O", 2}, {"S", 1}};
  EXPECT_EQ(MolecularFormula(m), want);
}

TEST(ParseSmiles, AmmoniumIsOneHeavyAtom) {
  const auto m = ParseSmiles("[NH4+]");
  EXPECT_EQ(HeavyAtomCount(m), 1);
  EXPECT_EQ(m.atom(0).h_count, 4);
  EXPECT_EQ(m.atom(0).charge, 1);
}

TEST(ParseSmiles, UnmatchedRingClosure) {
  try {
    ParseSmiles("C1CC");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GE(e.position(), 0u);
  }
}

TEST(ParseSmiles, RingClosureBondOnEitherEnd) {
  EXPECT_EQ(CanonicalKey(ParseSmiles("C1CC=1")), CanonicalKey(ParseSmiles("C=1CC1")));
  EXPECT_EQ(CanonicalKey(ParseSmiles("C1CC=1")), CanonicalKey(ParseSmiles("C1=CC1")));
}

TEST(ParseSmiles, RejectsUnsupportedAndMalformed) {
  for (const char* s : {"", "[13CH4]", "C[C@H](O)N", "*", "C.C", "C/C=C/C", "C(C", "C)C", "C()C",
                        "C(C)(C)(C)(C)C", "O=O=O", "c1cccc1", "[Xx]", "C=", "=C", "C==C",
                        "[NH4", "CX", "C11", "C=1CC-1", "C1.C1", "[CH3:1]"}) {
    EXPECT_THROW(ParseSmiles(s), ParseError) << s;
  }
}

TEST(ParseSmiles, ErrorPositionPointsAtToken) {
  try {
    ParseSmiles("CCC@C");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 3u);
  }
}

TEST(ParseSmiles, ImplicitHydrogens) {
  const auto m = ParseSmiles("OC(=O)C#N");
  EXPECT_EQ(m.atom(0).h_count, 1);
  EXPECT_EQ(m.atom(1).h_count, 0);
  EXPECT_EQ(m.atom(2).h_count, 0);
  EXPECT_EQ(m.atom(4).h_count, 0);
  const auto s = ParseSmiles("CS(=O)(=O)C");
  EXPECT_EQ(s.BondOrderSum(1), 6);
  EXPECT_EQ(s.atom(1).h_count, 0);
}

TEST(ParseSmiles, PercentRingLabels) {
  EXPECT_EQ(CanonicalKey(ParseSmiles("C%10CCCCC%10")), CanonicalKey(ParseSmiles("C1CCCCC1")));
}

TEST(Aromaticity, PerceivedFromKekuleForm) {
  for (const auto& [kek, aro] : std::vector<std::pair<std::string, std::string>>{
           {"C1=CC=CC=C1", "c1ccccc1"},
           {"C1=CC2=CC=CC=C2C=C1", "c1ccc2ccccc2c1"},
           {"N1C=CC=C1", "c1cc[nH]c1"},
           {"O1C=CC=C1", "c1ccoc1"},
           {"S1C=CC=C1", "c1ccsc1"},
           {"N1=CC=CC=C1", "c1ccncc1"},
           {kCelecoxibKekule, kCelecoxibAromatic}}) {
    const auto a = ParseSmiles(kek);
    const auto b = ParseSmiles(aro);
    EXPECT_EQ(CanonicalKey(a), CanonicalKey(b)) << kek;
    EXPECT_EQ(MorganFingerprint(a, 2, FpMode::kCount), MorganFingerprint(b, 2, FpMode::kCount))
        << kek;
  }
}

TEST(Aromaticity, Flags) {
  const auto benzene = ParseSmiles("C1=CC=CC=C1");
  for (const auto& a : benzene.atoms()) EXPECT_TRUE(a.aromatic);
  for (const auto& b : benzene.bonds()) EXPECT_EQ(b.order(), BondOrder::kAromatic);
  const auto cyclohexene = ParseSmiles("C1=CCCCC1");
  for (const auto& a : cyclohexene.atoms()) {
    EXPECT_FALSE(a.aromatic);
    EXPECT_TRUE(a.in_ring);
  }
  const auto quinone = ParseSmiles("O=C1C=CC(=O)C=C1");
  for (const auto& a : quinone.atoms()) EXPECT_FALSE(a.aromatic);
  const auto toluene = ParseSmiles("Cc1ccccc1");
  EXPECT_FALSE(toluene.atom(0).in_ring);
  EXPECT_FALSE(toluene.bond(0).in_ring);
}

TEST(Molecule, FromGraphValidation) {
  MolGraph g;
  const int a = g.AddAtom(6);
  g.AddAtom(6);
  g.AddBond(a, a);
  EXPECT_THROW(Molecule::FromGraph(g), InvalidMolecule);

  MolGraph dup;
  dup.AddAtom(6);
  dup.AddAtom(6);
  dup.AddBond(0, 1);
  dup.AddBond(1, 0);
  EXPECT_THROW(Molecule::FromGraph(dup), InvalidMolecule);

  MolGraph split;
  split.AddAtom(6);
  split.AddAtom(6);
  EXPECT_THROW(Molecule::FromGraph(split), InvalidMolecule);

  MolGraph over;
  over.AddAtom(9);
  over.AddAtom(6);
  over.AddBond(0, 1, 2);
  EXPECT_FALSE(Molecule::TryFromGraph(over).has_value());

  EXPECT_THROW(Molecule::FromGraph(MolGraph{}), InvalidMolecule);
}

TEST(Valence, Table) {
  EXPECT_EQ(AllowedValences(6, 0), std::vector<int>{4});
  EXPECT_EQ(AllowedValences(7, 0), std::vector<int>{3});
  EXPECT_EQ(AllowedValences(8, 0), std::vector<int>{2});
  EXPECT_EQ(AllowedValences(16, 0), (std::vector<int>{2, 4, 6}));
  EXPECT_EQ(AllowedValences(15, 0), (std::vector<int>{3, 5}));
  for (int z : {9, 17, 35, 53}) EXPECT_EQ(AllowedValences(z, 0), std::vector<int>{1});
  EXPECT_EQ(AllowedValences(7, 1), std::vector<int>{4});
  EXPECT_EQ(AllowedValences(8, -1), std::vector<int>{1});
}

TEST(WriteSmiles, SingleCarbon) { EXPECT_EQ(WriteSmiles(ParseSmiles("C")), "C"); }

TEST(WriteSmiles, RoundTripPreservesKey) {
  for (const auto& s : FullCorpus()) {
    const auto m = ParseSmiles(s);
    const auto written = WriteSmiles(m);
    EXPECT_EQ(CanonicalKey(ParseSmiles(written)), CanonicalKey(m)) << s << " -> " << written;
  }
}

TEST(WriteSmiles, SeedFileRoundTrips) {
  const auto records = ReadSmilesFile(std::string(MOLBO_TEST_DATA_DIR) + "/seeds.smi");
  EXPECT_GE(records.size(), 90u);
  for (const auto& r : records) {
    EXPECT_EQ(CanonicalKey(ParseSmiles(WriteSmiles(r.mol))), CanonicalKey(r.mol)) << r.smiles;
    EXPECT_NE(CanonicalKey(r.mol), CanonicalKey(ParseSmiles(kCelecoxibKekule)));
  }
}

TEST(CanonicalKey, NotationIndependent) {
  EXPECT_EQ(CanonicalKey(ParseSmiles("C(C)O")), CanonicalKey(ParseSmiles("OCC")));
  EXPECT_EQ(CanonicalKey(ParseSmiles("OC(=O)C")), CanonicalKey(ParseSmiles("CC(O)=O")));
  EXPECT_NE(CanonicalKey(ParseSmiles(kPentane)), CanonicalKey(ParseSmiles(kIcosane)));
  EXPECT_NE(CanonicalKey(ParseSmiles("CCO")), CanonicalKey(ParseSmiles("COC")));
  EXPECT_NE(CanonicalKey(ParseSmiles("C1CCCCC1")), CanonicalKey(ParseSmiles("C1CCCC1C")));
}

TEST(CanonicalKey, CelecoxibShuffles) {
  Rng rng(7);
  const auto m = ParseSmiles(kCelecoxibKekule);
  const auto key = CanonicalKey(m);
  const auto smiles = WriteSmiles(m);
  for (int i = 0; i < 500; ++i) {
    const auto s = Shuffled(m, rng);
    ASSERT_EQ(CanonicalKey(s), key);
    ASSERT_EQ(WriteSmiles(s), smiles);
  }
}

TEST(CanonicalKey, SymmetricGraphsShuffle) {
  Rng rng(8);
  for (const char* s : {"C1CC2CCC1C2", "C12C3C4C1C5C2C3C45", "c1ccc2ccccc2c1", "CC(C)(C)C",
                        "C1CCC2(CC1)CCCCC2"}) {
    const auto m = ParseSmiles(s);
    const auto key = CanonicalKey(m);
    for (int i = 0; i < 200; ++i) ASSERT_EQ(CanonicalKey(Shuffled(m, rng)), key) << s;
  }
}

TEST(Fingerprint, SingleCarbonRadiusZero) {
  const auto fp = MorganFingerprint(ParseSmiles("C"), 0, FpMode::kCount);
  ASSERT_EQ(fp.size(), 1u);
  EXPECT_EQ(fp.entries()[0].second, 1u);
}

TEST(Fingerprint, CountsAndModes) {
  const auto m = ParseSmiles(kIcosane);
  const auto count = MorganFingerprint(m, 2, FpMode::kCount);
  const auto binary = MorganFingerprint(m, 2, FpMode::kBinary);
  EXPECT_EQ(count.TotalCount(), 20u * 3u);
  EXPECT_EQ(binary.size(), count.size());
  for (const auto& [id, c] : binary.entries()) EXPECT_EQ(c, 1u);
  EXPECT_EQ(WithMode(count, FpMode::kBinary), binary);
  EXPECT_THROW(MorganFingerprint(m, kMaxFingerprintRadius + 1, FpMode::kCount), InputError);
}

TEST(Fingerprint, NonemptyForEveryMolecule) {
  for (const auto& s : FullCorpus()) {
    for (int r = 0; r <= 3; ++r) {
      EXPECT_FALSE(MorganFingerprint(ParseSmiles(s), r, FpMode::kBinary).empty());
    }
  }
}

TEST(Fingerprint, PermutationInvariant) {
  Rng rng(9);
  auto corpus = FullCorpus();
  corpus.resize(20);
  for (const auto& s : corpus) {
    const auto m = ParseSmiles(s);
    const auto fp = MorganFingerprint(m, 2, FpMode::kCount);
    for (int i = 0; i < 500; ++i) {
      ASSERT_EQ(MorganFingerprint(Shuffled(m, rng), 2, FpMode::kCount), fp) << s;
    }
  }
}

TEST(Fingerprint, FoldKeepsTotal) {
  const auto fp = MorganFingerprint(ParseSmiles(kCelecoxibKekule), 2, FpMode::kCount);
  const auto folded = Fold(fp, 64);
  EXPECT_EQ(folded.TotalCount(), fp.TotalCount());
  for (const auto& [id, c] : folded.entries()) EXPECT_LT(id, 64u);
}

TEST(Tanimoto, HandValues) {
  const Fingerprint a({{1, 2}, {2, 1}}, FpMode::kCount, 2);
  const Fingerprint b({{1, 1}, {3, 3}}, FpMode::kCount, 2);
  EXPECT_NEAR(Tanimoto(a, b), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(Tanimoto(WithMode(a, FpMode::kBinary), WithMode(b, FpMode::kBinary)), 1.0 / 3.0,
              1e-15);
  EXPECT_EQ(Tanimoto(a, a), 1.0);
  EXPECT_EQ(Tanimoto(a, Fingerprint({{7, 1}}, FpMode::kCount, 2)), 0.0);
  const Fingerprint e({}, FpMode::kCount, 2);
  EXPECT_EQ(Tanimoto(e, e), 1.0);
  EXPECT_EQ(Tanimoto(e, a), 0.0);
}

TEST(Tanimoto, MismatchIsInputError) {
  const Fingerprint a({{1, 1}}, FpMode::kCount, 2);
  EXPECT_THROW(Tanimoto(a, Fingerprint({{1, 1}}, FpMode::kBinary, 2)), InputError);
  EXPECT_THROW(Tanimoto(a, Fingerprint({{1, 1}}, FpMode::kCount, 3)), InputError);
}

TEST(Tanimoto, PropertiesAgainstMapOracle) {
  Rng rng(10);
  for (int i = 0; i < 2000; ++i) {
    const auto mode = i % 2 ? FpMode::kBinary : FpMode::kCount;
    const auto a = testing::RandomFingerprint(rng, mode, 8, 3);
    const auto b = testing::RandomFingerprint(rng, mode, 8, 3);
    const double t = Tanimoto(a, b);
    EXPECT_NEAR(t, testing::MapTanimoto(a, b), 1e-15);
    EXPECT_EQ(t, Tanimoto(b, a));
    EXPECT_GE(t, 0.0);
    EXPECT_LE(t, 1.0);
    if (mode == FpMode::kCount) EXPECT_EQ(t == 1.0, a == b);
  }
}

TEST(Tanimoto, SizeMismatchedPairsCountDistinguishes) {
  for (const auto& [x, y] : std::vector<std::pair<const char*, const char*>>{
           {kPentane, kIcosane}, {kCelecoxibKekule, kCelecoxibAnalogue}}) {
    const auto a = ParseSmiles(x);
    const auto b = ParseSmiles(y);
    const double count =
        Tanimoto(MorganFingerprint(a, 2, FpMode::kCount), MorganFingerprint(b, 2, FpMode::kCount));
    const double binary = Tanimoto(MorganFingerprint(a, 2, FpMode::kBinary),
                                   MorganFingerprint(b, 2, FpMode::kBinary));
    EXPECT_LT(count, 1.0);
    EXPECT_GE(binary, count);
  }
}

TEST(Tanimoto, CelecoxibPairBinaryIdentical) {
  const auto a = MorganFingerprint(ParseSmiles(kCelecoxibKekule), 2, FpMode::kBinary);
  const auto b = MorganFingerprint(ParseSmiles(kCelecoxibAnalogue), 2, FpMode::kBinary);
  EXPECT_EQ(a, b);
}

// Butane vs pentane (m = n + 1) is a counterexample, so the property is
// asserted only for chains differing by at least two carbons.
TEST(Tanimoto, AlkaneSeriesCountDominance) {
  for (int n = 3; n <= 12; ++n) {
    for (int m = n + 2; m <= 20; ++m) {
      const auto a = ParseSmiles(std::string(static_cast<std::size_t>(n), 'C'));
      const auto b = ParseSmiles(std::string(static_cast<std::size_t>(m), 'C'));
      EXPECT_GE(Tanimoto(MorganFingerprint(a, 2, FpMode::kBinary),
                         MorganFingerprint(b, 2, FpMode::kBinary)),
                Tanimoto(MorganFingerprint(a, 2, FpMode::kCount),
                         MorganFingerprint(b, 2, FpMode::kCount)))
          << n << " vs " << m;
    }
  }
}

TEST(Formula, AdditivityAndFormatting) {
  for (const auto& s : FullCorpus()) {
    const auto m = ParseSmiles(s);
    const auto f = MolecularFormula(m);
    int heavy = 0;
    for (const auto& [el, n] : f) {
      if (el != "H") heavy += n;
    }
    EXPECT_EQ(heavy, HeavyAtomCount(m)) << s;
    EXPECT_EQ(ParseFormula(FormatFormula(f)), f) << s;
  }
  EXPECT_EQ(FormatFormula(ParseFormula("C9H10N2O2PF2Cl")), "C9H10ClF2N2O2P");
  EXPECT_THROW(ParseFormula("C2X"), InputError);
  EXPECT_THROW(ParseFormula(""), InputError);
}

TEST(ReadSmiles, SkipsCommentsAndTitles) {
  std::istringstream in("# header\n\nCCO ethanol\n  c1ccccc1\tbenzene\n");
  const auto recs = ReadSmiles(in);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].smiles, "CCO");
  EXPECT_EQ(recs[1].smiles, "c1ccccc1");
  EXPECT_EQ(recs[1].line, 4);
  std::istringstream bad("CCO\nC1CC\n");
  EXPECT_THROW(ReadSmiles(bad), InputError);
}

}  // namespace
}  // namespace molbo::chem
