#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "shred/errors.hpp"
#include "shred/io.hpp"

using namespace shred;

TEST_CASE("walk file round trip") {
  const StepLaw law = build_step_law(1.5);
  Rng rng(3);
  WalkFile w{1.5, 7, sample_excursion(law, 500, rng)};
  std::stringstream ss;
  write_walk_file(ss, w);
  const std::string text = ss.str();
  CHECK(text.rfind("shredwalk v1 alpha=1.5 n=500 seed=7\n", 0) == 0);
  const auto back = read_walk_file(ss);
  CHECK(back.alpha == 1.5);
  CHECK(back.seed == 7);
  CHECK(back.walk == w.walk);
  std::stringstream again;
  write_walk_file(again, back);
  CHECK(again.str() == text);
}

TEST_CASE("malformed walk files") {
  auto bad = [](const std::string& s) {
    std::stringstream ss(s);
    CHECK_THROWS_AS(read_walk_file(ss), MalformedConfig);
  };
  bad("");
  bad("shredwalk v2 alpha=1.5 n=1 seed=0\n0\n-1\n");
  bad("shredwalk v1 alpha=x n=1 seed=0\n0\n-1\n");
  bad("shredwalk v1 alpha=1.5 n=2 seed=0\n0\n-1\n");
  bad("shredwalk v1 alpha=1.5 n=1 seed=0\n-1\n0\n");
  bad("shredwalk v1 alpha=1.5 n=1 seed=0\n0\nabc\n");
  bad("shredwalk v1 alpha=1.5 seed=0 n=1\n0\n-1\n");
}

TEST_CASE("number formatting is shortest round trip") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5, 123456789.0}) {
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  Table t{"t", {"x", "note"}};
  t.add({"1", "a,b"});
  CHECK_THROWS(t.add({"1"}));
  std::stringstream ss;
  write_csv(ss, t);
  CHECK(ss.str() == "x,note\r\n1,\"a,b\"\r\n");
}

TEST_CASE("sha256 known vectors and manifest") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto dir = std::filesystem::temp_directory_path() / "shred_manifest_test";
  std::filesystem::remove_all(dir);
  write_text_file(dir / "b.txt", "abc");
  write_text_file(dir / "sub" / "a.txt", "");
  const auto m = write_manifest(dir, {{"command", "test"}});
  REQUIRE(m["files"].size() == 2);
  CHECK(m["files"][0]["path"] == "b.txt");
  CHECK(m["files"][0]["sha256"] == sha256_hex("abc"));
  CHECK(m["files"][1]["path"] == "sub/a.txt");
  CHECK(m["command"] == "test");
  // Re-running does not list the manifest itself.
  CHECK(write_manifest(dir)["files"].size() == 2);
  std::filesystem::remove_all(dir);
}
