// Copyright 2026 The Semsteg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "semsteg/semantic_space.h"

#include <gtest/gtest.h>

#include <vector>

#include "test_util.h"

namespace semsteg {
namespace {

using testing::Id;
using testing::SmallTree;

class SemanticSpaceTest : public ::testing::Test {
 protected:
  OntologyTree tree_ = SmallTree();
  EntityId apple_ = Id(tree_, "Food/Fruit/apple");
  EntityId doctor_ = Id(tree_, "Person/Profession/doctor");
  EntityId vegas_ = Id(tree_, "Location/Tourism Location/Las Vegas");
};

TEST_F(SemanticSpaceTest, TypeLen) {
  EXPECT_EQ(TypeLen(SemType{{apple_, 1}, {doctor_, 1}}), 2u);
  EXPECT_EQ(TypeLen(SemType{}), 0u);
  EXPECT_EQ(TypeLen(SemType{{vegas_, 3}}), 3u);
}

TEST_F(SemanticSpaceTest, TypeLeq) {
  EXPECT_TRUE(TypeLeq(SemType{{apple_, 1}}, SemType{{apple_, 1}, {doctor_, 1}}));
  EXPECT_FALSE(TypeLeq(SemType{{apple_, 2}}, SemType{{apple_, 1}, {doctor_, 5}}));
  SemType t{{apple_, 2}, {vegas_, 1}};
  EXPECT_TRUE(TypeLeq(t, t));
  EXPECT_TRUE(TypeLeq(SemType{}, t));
}

TEST_F(SemanticSpaceTest, TypeAdd) {
  EXPECT_EQ(TypeAdd(SemType{{apple_, 1}}, SemType{{doctor_, 1}}),
            (SemType{{apple_, 1}, {doctor_, 1}}));
  SemType t{{apple_, 2}, {vegas_, 1}};
  EXPECT_EQ(TypeAdd(t, SemType{}), t);
  EXPECT_EQ(TypeAdd(SemType{{apple_, 1}}, SemType{{apple_, 2}}),
            (SemType{{apple_, 3}}));
}

TEST_F(SemanticSpaceTest, ZeroCountsAreNotStored) {
  SemType t;
  t.Add(apple_, 0);
  EXPECT_TRUE(t.empty());
  EXPECT_EQ(t, SemType{});
}

// Every type over 3 entities with counts <= 2.
std::vector<SemType> AllSmallTypes(const std::vector<EntityId>& ids) {
  std::vector<SemType> out;
  for (std::uint32_t a = 0; a <= 2; ++a) {
    for (std::uint32_t b = 0; b <= 2; ++b) {
      for (std::uint32_t c = 0; c <= 2; ++c) {
        SemType t;
        t.Add(ids[0], a);
        t.Add(ids[1], b);
        t.Add(ids[2], c);
        out.push_back(t);
      }
    }
  }
  return out;
}

TEST_F(SemanticSpaceTest, LeqIsAPartialOrderExhaustively) {
  const auto types = AllSmallTypes({apple_, doctor_, vegas_});
  ASSERT_EQ(types.size(), 27u);
  for (const auto& a : types) {
    EXPECT_TRUE(TypeLeq(a, a));
    for (const auto& b : types) {
      if (TypeLeq(a, b) && TypeLeq(b, a)) EXPECT_EQ(a, b);
      for (const auto& c : types) {
        if (TypeLeq(a, b) && TypeLeq(b, c)) EXPECT_TRUE(TypeLeq(a, c));
      }
    }
  }
}

TEST_F(SemanticSpaceTest, AddIsACommutativeMonoidCompatibleWithLenAndLeq) {
  const auto types = AllSmallTypes({apple_, doctor_, vegas_});
  for (const auto& a : types) {
    EXPECT_EQ(TypeAdd(a, SemType{}), a);
    for (const auto& b : types) {
      const SemType ab = TypeAdd(a, b);
      EXPECT_EQ(ab, TypeAdd(b, a));
      EXPECT_TRUE(TypeLeq(a, ab));
      EXPECT_EQ(TypeLen(ab), TypeLen(a) + TypeLen(b));
    }
  }
  for (std::size_t i = 0; i < types.size(); i += 5) {
    for (std::size_t j = 0; j < types.size(); j += 3) {
      for (std::size_t k = 0; k < types.size(); k += 4) {
        EXPECT_EQ(TypeAdd(TypeAdd(types[i], types[j]), types[k]),
                  TypeAdd(types[i], TypeAdd(types[j], types[k])));
      }
    }
  }
}

TEST_F(SemanticSpaceTest, ExtractWorkedExample) {
  EXPECT_EQ(ExtractType("An apple a day, keeps the doctor away", tree_),
            (SemType{{apple_, 1}, {doctor_, 1}}));
  EXPECT_EQ(ExtractType("", tree_), SemType{});
  EXPECT_EQ(ExtractType("apple apple", tree_), (SemType{{apple_, 2}}));
}

TEST_F(SemanticSpaceTest, ExtractIsCaseAndWhitespaceInsensitive) {
  const SemType expected{{apple_, 1}, {vegas_, 1}};
  for (const char* s : {"an apple in Las Vegas", "  AN APPLE IN LAS VEGAS\t",
                        "An Apple in las   vegas\n"}) {
    EXPECT_EQ(ExtractType(s, tree_), expected) << s;
  }
}

TEST_F(SemanticSpaceTest, ExtractRespectsWordBoundaries) {
  EXPECT_EQ(ExtractType("pineapple applesauce", tree_), SemType{});
  EXPECT_EQ(ExtractType("apples, doctors!", tree_),
            (SemType{{apple_, 1}, {doctor_, 1}}));
  EXPECT_EQ(ExtractType("the doctor's apple.", tree_),
            (SemType{{apple_, 1}, {doctor_, 1}}));
}

TEST_F(SemanticSpaceTest, ExtractPrefersLongestMatch) {
  const EntityId new_york = Id(tree_, "Location/City/New York");
  const EntityId york = Id(tree_, "Location/City/York");
  EXPECT_EQ(ExtractType("from New York to York", tree_),
            (SemType{{new_york, 1}, {york, 1}}));
  EXPECT_EQ(ExtractType("Las Vegas, not just Vegas", tree_),
            (SemType{{vegas_, 2}}));
}

TEST_F(SemanticSpaceTest, AmbiguousSurfaceResolvesToCanonicallyFirstPath) {
  const EntityId city = Id(tree_, "Location/City/Washington");
  const EntityId person = Id(tree_, "Person/Politician/Washington");
  EXPECT_EQ(ExtractType("we drove to Washington", tree_), (SemType{{city, 1}}));
  EXPECT_EQ(ExtractType("George Washington slept here", tree_),
            (SemType{{person, 1}}));
}

TEST_F(SemanticSpaceTest, ExtractNormalizesUnicode) {
  const OntologyTree tree = testing::MakeTree(
      {{"Location/City/Zürich", {"Zürich"}}, {"Food/Dish/饺子", {"饺子"}}});
  const EntityId zurich = Id(tree, "Location/City/Zürich");
  const EntityId dumpling = Id(tree, "Food/Dish/饺子");
  // Decomposed u + combining diaeresis, upper case.
  EXPECT_EQ(ExtractType("ZU\xCC\x88RICH is cold", tree), (SemType{{zurich, 1}}));
  EXPECT_EQ(ExtractType("我们吃饺子吧", tree), (SemType{{dumpling, 1}}));
}

TEST_F(SemanticSpaceTest, CanonicalOrderIsByPathString) {
  const auto order = tree_.canonical_order();
  for (std::size_t i = 1; i < order.size(); ++i) {
    EXPECT_LT(tree_.entity(order[i - 1]).path.str(),
              tree_.entity(order[i]).path.str());
    EXPECT_EQ(tree_.rank(order[i]), i);
  }
}

TEST_F(SemanticSpaceTest, TreeStructureHasThreeLevels) {
  for (EntityId id : tree_.canonical_order()) {
    const int leaf = tree_.leaf_node(id);
    const auto& nodes = tree_.nodes();
    EXPECT_EQ(nodes[leaf].depth, 3);
    EXPECT_EQ(nodes[nodes[leaf].parent].depth, 2);
    EXPECT_EQ(nodes[nodes[nodes[leaf].parent].parent].depth, 1);
    EXPECT_EQ(nodes[nodes[nodes[leaf].parent].parent].parent,
              OntologyTree::kRoot);
    EXPECT_EQ(tree_.concept_at_rank(tree_.rank(id)), tree_.ancestor(id, 1));
  }
}

TEST_F(SemanticSpaceTest, MentionTokenMask) {
  const auto mask =
      MentionTokenMask("We   saw Las Vegas, ate an apple.", tree_);
  EXPECT_EQ(mask, (std::vector<bool>{false, false, true, true, false, false,
                                     true}));
}

TEST(EntityPathTest, RejectsWrongDepth) {
  EXPECT_THROW(EntityPath::Parse("Location/Las Vegas"), Error);
  EXPECT_THROW(EntityPath::Parse("A/B/C/D"), Error);
  EXPECT_THROW(EntityPath::Parse("A//C"), Error);
  EXPECT_THROW(EntityPath::Parse("A/ B/C"), Error);
  EXPECT_EQ(EntityPath::Parse("A/B C/D").str(), "A/B C/D");
}

TEST(OntologyTreeTest, RejectsInvalidEntities) {
  auto build = [](std::vector<Entity> e) { return OntologyTree::Build(e); };
  EXPECT_THROW(build({{EntityId{0}, {"a"}, EntityPath::Parse("A/B/a")},
                      {EntityId{0}, {"b"}, EntityPath::Parse("A/B/b")}}),
               Error);
  EXPECT_THROW(build({{EntityId{0}, {"a"}, EntityPath::Parse("A/B/a")},
                      {EntityId{1}, {"b"}, EntityPath::Parse("A/B/a")}}),
               Error);
  EXPECT_THROW(build({{EntityId{0}, {}, EntityPath::Parse("A/B/a")}}), Error);
  EXPECT_THROW(build({{EntityId{0}, {"  "}, EntityPath::Parse("A/B/a")}}),
               Error);
  EXPECT_THROW(build({{EntityId{5}, {"a"}, EntityPath::Parse("A/B/a")}}),
               Error);
}

}  // namespace
}  // namespace semsteg
