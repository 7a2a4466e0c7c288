#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mrc/datasets.hpp"
#include "mrc/error.hpp"

using namespace mrc;

namespace {

ColumnMap basic_columns() { return ColumnMap::parse("y=time,z=age,x=a;b"); }

LoadResult load_text(const std::string& text, const ColumnMap& columns) {
  std::istringstream in(text);
  return load_csv(in, columns);
}

std::vector<RawRecord> synthetic(std::size_t n, std::size_t censored, std::size_t missing) {
  std::vector<RawRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    RawRecord r;
    r.y = static_cast<double>(i);
    r.z = 0.5 * i;
    r.x = {1.0 * i, 2.0};
    r.x_missing = {false, false};
    r.delta = i < censored ? 0 : 1;
    if (i >= censored && i < censored + missing) r.x_missing[1] = true;
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_CASE("well-formed file") {
  const auto r = load_text("time,age,a,b\n1,2,3,4\n2,3,4,5\n3.5,-1,0,1e-3\n", basic_columns());
  CHECK(r.records.size() == 3);
  CHECK(r.rejects.empty());
  CHECK(r.records[2].y == 3.5);
  CHECK(r.records[2].x[1] == 1e-3);
  CHECK(r.records[0].line == 2);
}

TEST_CASE("blank response rejects the row") {
  const auto r = load_text("time,age,a,b\n1,2,3,4\n,3,4,5\n3,4,5,6\n", basic_columns());
  CHECK(r.records.size() == 2);
  REQUIRE(r.rejects.size() == 1);
  CHECK(r.rejects[0].line == 3);
  CHECK(r.rejects[0].reason.find("time") != std::string::npos);
}

TEST_CASE("comments, quoting, missing covariates and bad cells") {
  const std::string text =
      "# generated\n"
      "time,age,a,b,note\n"
      "1,2,3,4,\"x, y\"\n"
      "# mid-file comment\n"
      "2,3,,5,ok\n"
      "3,abc,1,1,bad\n"
      "4,5,6\n";
  const auto r = load_text(text, basic_columns());
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[1].x_missing[0]);
  CHECK(r.records[1].has_missing());
  REQUIRE(r.rejects.size() == 2);
  CHECK(r.rejects[0].line == 6);
  CHECK(r.rejects[0].reason.find("non-numeric") != std::string::npos);
  CHECK(r.rejects[1].line == 7);
}

TEST_CASE("missing column is a schema error naming it") {
  try {
    load_text("time,age,a\n1,2,3\n", basic_columns());
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("'b'") != std::string::npos);
    CHECK(e.code() == "datasets.schema");
  }
  CHECK_THROWS_AS(load_csv(std::filesystem::path("/nonexistent/file.csv"), basic_columns()), Error);
}

TEST_CASE("column map parsing") {
  const auto m = ColumnMap::parse("y=t, z=age, x=a, x=b, delta=status, trunc=entry");
  CHECK(m.x == std::vector<std::string>{"a", "b"});
  CHECK(m.delta == "status");
  CHECK(m.trunc == "entry");
  CHECK(ColumnMap::parse(m.to_string()).to_string() == m.to_string());
  CHECK_THROWS_AS(ColumnMap::parse("y=t,z=age"), SchemaError);
  CHECK_THROWS_AS(ColumnMap::parse("y=t,z=age,x=a,w=q"), SchemaError);
}

TEST_CASE("censoring and truncation columns") {
  const auto cols = ColumnMap::parse("y=time,z=age,x=a;b,delta=status,trunc=entry");
  const auto r = load_text(
      "time,age,a,b,status,entry\n"
      "5,1,1,1,1,2\n"
      "1,1,1,1,1,2\n"
      "5,1,1,1,2,\n"
      "5,1,1,1,0,\n",
      cols);
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[0].trunc == 2.0);
  CHECK(r.records[1].delta == 0);
  CHECK_FALSE(r.records[1].trunc.has_value());
  REQUIRE(r.rejects.size() == 2);
  CHECK(r.rejects[0].reason.find("truncation") != std::string::npos);
  CHECK(r.rejects[1].reason.find("0 or 1") != std::string::npos);
}

TEST_CASE("write then load reproduces the records") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin(0.2);
  const auto cols = ColumnMap::parse("y=time,z=age,x=a;b,delta=status,trunc=entry");
  std::vector<RawRecord> records;
  for (std::size_t i = 0; i < 50; ++i) {
    RawRecord r;
    r.line = i + 2;
    r.y = normal(rng) * 1e3;
    r.z = normal(rng) / 7.0;
    r.z_missing = coin(rng);
    if (r.z_missing) r.z = 0.0;
    for (int k = 0; k < 2; ++k) {
      const bool miss = coin(rng);
      r.x.push_back(miss ? 0.0 : normal(rng));
      r.x_missing.push_back(miss);
    }
    r.delta = coin(rng) ? 0 : 1;
    if (coin(rng)) r.trunc = r.y - 1.0;
    records.push_back(r);
  }
  std::stringstream buffer;
  write_csv(buffer, records, cols);
  const auto back = load_csv(buffer, cols);
  CHECK(back.rejects.empty());
  CHECK(back.records == records);
}

TEST_CASE("complete cases") {
  SUBCASE("no censoring or missingness keeps everything") {
    const auto cc = complete_cases(synthetic(20, 0, 0));
    CHECK(cc.data.n() == 20);
    CHECK(cc.provenance.kept == 20);
  }
  SUBCASE("152 records with 55 censored leave 97") {
    const auto cc = complete_cases(synthetic(152, 55, 0));
    CHECK(cc.data.n() == 97);
    CHECK(cc.provenance.dropped_censored == 55);
  }
  SUBCASE("censoring takes priority over missingness") {
    auto recs = synthetic(10, 3, 2);
    recs[0].x_missing[0] = true;  // censored and missing
    Provenance p;
    const auto kept = filter_complete(recs, &p);
    CHECK(p.dropped_censored == 3);
    CHECK(p.dropped_missing == 2);
    CHECK(p.kept == 5);
    CHECK(p.kept + p.dropped_censored + p.dropped_missing == p.input);
    Provenance again;
    CHECK(filter_complete(kept, &again) == kept);
    CHECK(again.kept == again.input);
  }
  SUBCASE("truncated records are kept") {
    auto recs = synthetic(5, 0, 0);
    recs[2].trunc = -1.0;
    const auto cc = complete_cases(recs);
    CHECK(cc.provenance.truncated_kept == 1);
    CHECK(cc.data.n() == 5);
  }
  SUBCASE("fewer than two complete cases") {
    CHECK_THROWS_AS(complete_cases(synthetic(5, 4, 0)), InsufficientData);
  }
  SUBCASE("provenance json") {
    Provenance p{10, 6, 3, 1, 0};
    CHECK(provenance_json(p) ==
          R"({"input":10,"kept":6,"dropped_censored":3,"dropped_missing":1,"truncated_kept":0})");
  }
}

TEST_CASE("file round trip on disk") {
  const auto path = std::filesystem::temp_directory_path() / "mrc_datasets_roundtrip.csv";
  const auto cols = basic_columns();
  const auto records = synthetic(4, 0, 0);
  std::vector<RawRecord> plain = records;
  for (auto& r : plain) r.delta.reset();
  write_csv(path, plain, cols);
  const auto back = load_csv(path, cols);
  REQUIRE(back.records.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(back.records[i].y == plain[i].y);
    CHECK(back.records[i].x == plain[i].x);
  }
  std::filesystem::remove(path);
}
