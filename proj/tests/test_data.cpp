#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "mahnn/data.hpp"

using namespace mahnn;

TEST_CASE("tokenize: lowercase with punctuation split off") {
  CHECK(tokenize("Tina likes Bob.") ==
        std::vector<std::string>{"tina", "likes", "bob", "."});
}

TEST_CASE("tokenize: empty and whitespace-only input") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \t ").empty());
}

TEST_CASE("tokenize: punctuation runs become separate tokens") {
  CHECK(tokenize("well...fine") ==
        std::vector<std::string>{"well", ".", ".", ".", "fine"});
  CHECK(tokenize("don't") == std::vector<std::string>{"don", "'", "t"});
}

TEST_CASE("tokenize: idempotent on alphanumeric tokens") {
  Rng rng(13);
  const std::vector<std::string> pool = {"alpha", "beta", "gamma42", "x",
                                         "longword"};
  for (int it = 0; it < 100; ++it) {
    std::vector<std::string> toks;
    const std::size_t n = 1 + rng() % 6;
    for (std::size_t i = 0; i < n; ++i) toks.push_back(pool[rng() % pool.size()]);
    std::string joined;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (i) joined += " ";
      joined += toks[i];
    }
    CHECK(tokenize(joined) == toks);
  }
}

TEST_CASE("load_tsv: two integer-labeled lines") {
  std::istringstream in("0\tbad movie\n1\tgood movie\n");
  LoadReport rep;
  auto corpus = load_tsv(in, nullptr, &rep);
  CHECK(corpus.examples.size() == 2);
  CHECK(corpus.num_classes == 2);
  CHECK(rep.accepted == 2);
  CHECK(rep.rejected == 0);
  CHECK(rep.avg_length == doctest::Approx(2.0));
  CHECK(corpus.examples[0].label == 0);
  CHECK(corpus.examples[0].tokens == std::vector<std::string>{"bad", "movie"});
  CHECK(corpus.examples[1].line == 2);
}

TEST_CASE("load_tsv: named labels resolve through the schema") {
  std::istringstream in("positive\tgood movie\nnegative\tawful\n");
  const std::vector<std::string> names = {"negative", "positive"};
  auto corpus = load_tsv(in, &names);
  CHECK(corpus.num_classes == 2);
  CHECK(corpus.examples[0].label == 1);
  CHECK(corpus.examples[1].label == 0);
}

TEST_CASE("load_tsv: unknown label name is a schema error") {
  std::istringstream in("neutral\tmeh\n");
  const std::vector<std::string> names = {"negative", "positive"};
  CHECK_THROWS_AS(load_tsv(in, &names), ParseError);
}

TEST_CASE("load_tsv: named label without a schema is rejected") {
  std::istringstream in("positive\tgood\n");
  CHECK_THROWS_AS(load_tsv(in), ParseError);
}

TEST_CASE("load_tsv: missing tab reports the line number") {
  std::istringstream in("0\tfine\nno separator here\n");
  try {
    load_tsv(in);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("load_tsv: text that tokenizes to nothing is skipped with a warning") {
  std::istringstream in("0\tgood\n1\t   \n");
  LoadReport rep;
  auto corpus = load_tsv(in, nullptr, &rep);
  CHECK(corpus.examples.size() == 1);
  CHECK(rep.accepted == 1);
  CHECK(rep.rejected == 1);
  REQUIRE(rep.warnings.size() == 1);
  CHECK(rep.warnings[0].find("line 2") != std::string::npos);
}

TEST_CASE("load_tsv: invalid UTF-8 bytes are replaced and counted") {
  std::istringstream in("0\tgood \xff movie\n");
  LoadReport rep;
  auto corpus = load_tsv(in, nullptr, &rep);
  CHECK(rep.replaced_bytes == 1);
  CHECK(corpus.examples.size() == 1);
}

TEST_CASE("load_tsv: same bytes give the same corpus") {
  const std::string bytes = "0\tone two\n1\tthree\n0\tfour five six\n";
  std::istringstream a(bytes), b(bytes);
  auto ca = load_tsv(a);
  auto cb = load_tsv(b);
  REQUIRE(ca.examples.size() == cb.examples.size());
  for (std::size_t i = 0; i < ca.examples.size(); ++i) {
    CHECK(ca.examples[i].tokens == cb.examples[i].tokens);
    CHECK(ca.examples[i].label == cb.examples[i].label);
  }
}

TEST_CASE("cv splits: n=100, k=10 gives ten disjoint folds of ten") {
  auto plan = make_cv_splits(100, 10, 1);
  REQUIRE(plan.folds.size() == 10);
  std::set<std::size_t> seen;
  for (const auto& fold : plan.folds) {
    CHECK(fold.size() == 10);
    for (const std::size_t i : fold) seen.insert(i);
  }
  CHECK(seen.size() == 100);
  CHECK(*seen.rbegin() == 99);
}

TEST_CASE("cv splits: n=103, k=10 gives fold sizes in {10, 11}") {
  auto plan = make_cv_splits(103, 10, 1);
  std::size_t total = 0, elevens = 0;
  for (const auto& fold : plan.folds) {
    CHECK((fold.size() == 10 || fold.size() == 11));
    elevens += fold.size() == 11;
    total += fold.size();
  }
  CHECK(total == 103);
  CHECK(elevens == 3);
}

TEST_CASE("cv splits: deterministic per seed, different across seeds") {
  auto a = make_cv_splits(50, 5, 77);
  auto b = make_cv_splits(50, 5, 77);
  CHECK(a.folds == b.folds);
  auto c = make_cv_splits(50, 5, 78);
  CHECK(a.folds != c.folds);
}

TEST_CASE("cv splits: contract violations") {
  CHECK_THROWS_AS(make_cv_splits(10, 1, 0), ConfigError);
  CHECK_THROWS_AS(make_cv_splits(5, 6, 0), ConfigError);
}

TEST_CASE("fixed split preserves file order") {
  auto plan = make_fixed_split(4, 2);
  CHECK(plan.train == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(plan.test == std::vector<std::size_t>{0, 1});
  CHECK(plan.folds.empty());
}
