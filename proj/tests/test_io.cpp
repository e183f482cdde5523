#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "cpaudit/io.hpp"
#include "cpaudit/synth.hpp"

using namespace cpaudit;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "cpaudit_io_tests";
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("csv round trip is bit exact") {
  auto ds = generate(basic_config(50, 3, 2.0, 42));
  ds.records[0].groups["site"] = "A";
  ds.records[1].groups["site"] = "B";
  const auto path = scratch() / "roundtrip.csv";
  save_dataset(ds, path, FileFormat::csv);
  const auto back = load_dataset(path, FileFormat::csv);
  REQUIRE(back.size() == ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(back.records[i].id == ds.records[i].id);
    CHECK(back.records[i].label == ds.records[i].label);
    for (std::size_t c = 0; c < 3; ++c) {
      // %.17g output must reparse to the identical double.
      CHECK(back.records[i].probs[c] == ds.records[i].probs[c]);
    }
  }
  CHECK(back.records[0].groups.at("site") == "A");
  CHECK(back.records[2].groups.count("site") == 0);
}

TEST_CASE("json round trip carries the taxonomy") {
  auto ds = generate(basic_config(20, 4, 2.0, 1));
  ds.taxonomy = {{0, 0}, {1, 0}, {2, 1}, {3, 1}};
  const auto path = scratch() / "roundtrip.json";
  save_dataset(ds, path, FileFormat::json);
  const auto back = load_dataset(path, FileFormat::json);
  CHECK(back.taxonomy == ds.taxonomy);
  CHECK(back.class_names == ds.class_names);
  REQUIRE(back.size() == 20);
  CHECK(back.records[7].probs == ds.records[7].probs);
}

TEST_CASE("csv refuses to drop a taxonomy") {
  auto ds = generate(basic_config(10, 2, 2.0, 1));
  ds.taxonomy = {{0, 0}, {1, 0}};
  CHECK_THROWS_WITH_AS(
      save_dataset(ds, scratch() / "tax.csv", FileFormat::csv),
      doctest::Contains("use JSON"), ValidationError);
}

TEST_CASE("missing file is an io error") {
  CHECK_THROWS_AS(load_dataset(scratch() / "nope.csv", FileFormat::csv),
                  IoError);
}

TEST_CASE("csv schema violations carry row numbers") {
  const auto dir = scratch();

  write_file(dir / "bad_header.csv", "name,p_0,p_1,label\nx,0.5,0.5,0\n");
  CHECK_THROWS_WITH_AS(load_dataset(dir / "bad_header.csv", FileFormat::csv),
                       doctest::Contains("must start with 'id'"),
                       ValidationError);

  write_file(dir / "bad_fields.csv", "id,p_0,p_1,label\nx,0.5,0.5\n");
  CHECK_THROWS_WITH_AS(load_dataset(dir / "bad_fields.csv", FileFormat::csv),
                       doctest::Contains("row 2"), ValidationError);

  write_file(dir / "bad_number.csv", "id,p_0,p_1,label\nx,0.5,zzz,0\n");
  CHECK_THROWS_WITH_AS(load_dataset(dir / "bad_number.csv", FileFormat::csv),
                       doctest::Contains("malformed number"), ValidationError);

  write_file(dir / "bad_sum.csv", "id,p_0,p_1,label\nx,0.9,0.3,0\n");
  CHECK_THROWS_WITH_AS(load_dataset(dir / "bad_sum.csv", FileFormat::csv),
                       doctest::Contains("row 2"), ValidationError);

  write_file(dir / "bad_col.csv", "id,p_0,p_1,label,extra\nx,0.5,0.5,0,y\n");
  CHECK_THROWS_WITH_AS(load_dataset(dir / "bad_col.csv", FileFormat::csv),
                       doctest::Contains("unexpected CSV column"),
                       ValidationError);

  write_file(dir / "empty.csv", "");
  CHECK_THROWS_AS(load_dataset(dir / "empty.csv", FileFormat::csv),
                  ValidationError);
}

TEST_CASE("json schema violations are validation errors") {
  const auto dir = scratch();
  write_file(dir / "not_json.json", "{nope");
  CHECK_THROWS_AS(load_dataset(dir / "not_json.json", FileFormat::json),
                  ValidationError);
  write_file(dir / "no_records.json", "{\"class_names\": [\"a\", \"b\"]}");
  CHECK_THROWS_WITH_AS(load_dataset(dir / "no_records.json", FileFormat::json),
                       doctest::Contains("records"), ValidationError);
}

TEST_CASE("format helpers") {
  CHECK(parse_format("csv") == FileFormat::csv);
  CHECK(parse_format("json") == FileFormat::json);
  CHECK_THROWS_AS(parse_format("xml"), ValidationError);
  CHECK(format_for_path("data.json") == FileFormat::json);
  CHECK(format_for_path("data.csv") == FileFormat::csv);
  CHECK(format_for_path("data") == FileFormat::csv);
}

TEST_CASE("windows line endings are accepted") {
  const auto dir = scratch();
  write_file(dir / "crlf.csv", "id,p_0,p_1,label\r\nx,0.5,0.5,0\r\n");
  const auto ds = load_dataset(dir / "crlf.csv", FileFormat::csv);
  CHECK(ds.size() == 1);
  CHECK(ds.records[0].id == "x");
}
