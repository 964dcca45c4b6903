#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <set>

#include "sigverify/dataset.hpp"
#include "sigverify/errors.hpp"
#include "sigverify/signature_io.hpp"
#include "sigverify/synthetic.hpp"

using namespace sigverify;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("sigverify_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_svc(const fs::path& p, double offset) {
  write_text_file(p, "3\n" + std::to_string(offset) + " 0 0 1\n1 1 10 1\n2 0 20 1\n");
}

Dataset svc_like(int clients, int genuine, int forgeries) {
  Dataset d;
  for (int c = 1; c <= clients; ++c) {
    for (int s = 1; s <= genuine + forgeries; ++s) {
      OnlineSignature sig;
      sig.points = {{0, 0, 0, true}, {double(s), double(c), 10, true}};
      sig.client_id = std::to_string(c);
      sig.sample_index = s;
      sig.label = s <= genuine ? SampleLabel::genuine : SampleLabel::skilled_forgery;
      d.add(sig);
    }
  }
  return d;
}

}  // namespace

TEST_CASE("svc layout: 40 users x 40 files") {
  const auto dir = fresh_dir("svc40");
  for (int u = 1; u <= 40; ++u) {
    for (int s = 1; s <= 40; ++s) write_svc(dir / ("USER" + std::to_string(u) + "_" + std::to_string(s) + ".TXT"), s);
  }
  const auto d = load_dataset(dir, Naming::svc);
  CHECK(d.client_count() == 40);
  for (const auto& [id, c] : d.clients()) {
    CHECK(c.genuine.size() == 20);
    CHECK(c.forgeries.size() == 20);
    CHECK(c.genuine.front().sample_index == 1);
    CHECK(c.forgeries.back().sample_index == 40);
  }
  fs::remove_all(dir);
}

TEST_CASE("svc layout: single file, also U1S1 spelling") {
  const auto dir = fresh_dir("svc1");
  write_svc(dir / "USER1_1.TXT", 0);
  auto d = load_dataset(dir, Naming::svc);
  CHECK(d.client_count() == 1);
  CHECK(d.client("1").genuine.size() == 1);
  CHECK(d.client("1").forgeries.empty());

  write_svc(dir / "U2S21.TXT", 0);
  write_svc(dir / "U2S3.TXT", 0);
  d = load_dataset(dir, Naming::svc);
  CHECK(d.client("2").genuine.size() == 1);
  CHECK(d.client("2").forgeries.size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("load errors") {
  const auto dir = fresh_dir("empty");
  CHECK_THROWS_AS(load_dataset(dir, Naming::svc), InvalidArgument);
  CHECK_THROWS_AS(load_dataset(dir / "missing", Naming::svc), IoError);

  write_svc(dir / "USER3_25.TXT", 0);  // forgery only
  CHECK_THROWS_WITH_AS(load_dataset(dir, Naming::svc), doctest::Contains("no genuine"), InvalidArgument);
  fs::remove_all(dir);
}

TEST_CASE("manifest dataset round trip") {
  const auto dir = fresh_dir("manifest");
  SyntheticConfig cfg;
  cfg.n_clients = 3;
  cfg.genuine_per_client = 2;
  cfg.forgeries_per_client = 1;
  cfg.seed = 5;
  const auto d = generate_synthetic_dataset(cfg);
  write_manifest_dataset(d, dir);
  const auto back = load_dataset(dir, Naming::csv_manifest);
  REQUIRE(back.client_count() == 3);
  for (const auto& [id, c] : d.clients()) {
    const auto& b = back.client(id);
    REQUIRE(b.genuine.size() == c.genuine.size());
    REQUIRE(b.forgeries.size() == c.forgeries.size());
    for (std::size_t i = 0; i < c.genuine.size(); ++i) CHECK(b.genuine[i].points == c.genuine[i].points);
  }
  fs::remove_all(dir);
}

TEST_CASE("manifest parse errors carry the line number") {
  const auto dir = fresh_dir("badmanifest");
  write_text_file(dir / "manifest.jsonl", "{\"path\": \"a.csv\", \"client\": \"1\"}\n");
  write_text_file(dir / "a.csv", "x,y\n0,0\n");
  CHECK_THROWS_WITH_AS(load_dataset(dir, Naming::csv_manifest), doctest::Contains("manifest.jsonl:1"), ParseError);
  fs::remove_all(dir);
}

TEST_CASE("split: DTW protocol sizes") {
  const auto d = svc_like(3, 20, 20);
  const auto split = split_templates(d, {5, TemplatePool::first_10, false}, 42);
  for (const auto& [id, cs] : split.clients) {
    REQUIRE(cs.templates.size() == 5);
    CHECK(cs.test.size() == 35);
    for (const auto* t : cs.templates) CHECK(t->sample_index <= 10);
    int genuine_tests = 0;
    for (const auto* t : cs.test) genuine_tests += t->label == SampleLabel::genuine;
    CHECK(genuine_tests == 15);
    std::set<const OnlineSignature*> tset(cs.templates.begin(), cs.templates.end());
    for (const auto* t : cs.test) CHECK_FALSE(tset.contains(t));
  }
}

TEST_CASE("split: full pool selection is order independent") {
  const auto d = svc_like(2, 10, 0);
  const auto a = split_templates(d, {10, TemplatePool::first_10, false}, 1);
  const auto b = split_templates(d, {10, TemplatePool::first_10, false}, 99);
  for (const auto& [id, cs] : a.clients) {
    CHECK(cs.templates == b.clients.at(id).templates);
    CHECK(cs.test.empty());
  }
}

TEST_CASE("split: determinism and seed sensitivity") {
  const auto d = svc_like(4, 20, 20);
  const SplitOptions opt{5, TemplatePool::all, true};
  const auto a = split_templates(d, opt, 7);
  const auto b = split_templates(d, opt, 7);
  const auto c = split_templates(d, opt, 8);
  bool any_diff = false;
  for (const auto& [id, cs] : a.clients) {
    CHECK(cs.templates == b.clients.at(id).templates);
    CHECK(cs.train_forgeries == b.clients.at(id).train_forgeries);
    CHECK(cs.test == b.clients.at(id).test);
    CHECK(cs.train_forgeries.size() == 5);
    CHECK(cs.test.size() == 30);
    any_diff |= cs.templates != c.clients.at(id).templates;
  }
  CHECK(any_diff);
}

TEST_CASE("split: too many templates") {
  const auto d = svc_like(1, 20, 0);
  CHECK_THROWS_AS(split_templates(d, {11, TemplatePool::first_10, false}, 0), InvalidArgument);
  CHECK_NOTHROW(split_templates(d, {11, TemplatePool::all, false}, 0));
}
