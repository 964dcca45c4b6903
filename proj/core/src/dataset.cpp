#include "sigverify/dataset.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "sigverify/errors.hpp"
#include "sigverify/rng.hpp"
#include "sigverify/signature_io.hpp"

namespace sigverify {

namespace fs = std::filesystem;

void Dataset::add(OnlineSignature sig) {
  auto& entry = clients_[sig.client_id];
  auto& list = sig.label == SampleLabel::genuine ? entry.genuine : entry.forgeries;
  const auto pos = std::upper_bound(
      list.begin(), list.end(), sig.sample_index,
      [](int idx, const OnlineSignature& s) { return idx < s.sample_index; });
  list.insert(pos, std::move(sig));
}

void Dataset::validate() const {
  if (clients_.empty()) throw InvalidArgument("dataset is empty");
  for (const auto& [id, samples] : clients_) {
    if (samples.genuine.empty()) {
      throw InvalidArgument("client '" + id + "' has no genuine samples");
    }
    for (const auto* list : {&samples.genuine, &samples.forgeries}) {
      for (const auto& s : *list) {
        if (s.client_id != id) throw InvalidArgument("client id mismatch in dataset");
        sigverify::validate(s);
      }
    }
  }
}

const ClientSamples& Dataset::client(const std::string& id) const {
  const auto it = clients_.find(id);
  if (it == clients_.end()) throw InvalidArgument("unknown client '" + id + "'");
  return it->second;
}

std::size_t Dataset::signature_count() const {
  std::size_t n = 0;
  for (const auto& [id, c] : clients_) n += c.genuine.size() + c.forgeries.size();
  return n;
}

Dataset Dataset::merge(const Dataset& a, const Dataset& b) {
  Dataset out = a;
  for (const auto& [id, c] : b.clients_) {
    if (out.clients_.contains(id)) {
      throw InvalidArgument("client id '" + id + "' present in both datasets");
    }
    out.clients_[id] = c;
  }
  return out;
}

Naming naming_from_string(const std::string& s) {
  if (s == "svc") return Naming::svc;
  if (s == "csv-manifest" || s == "manifest") return Naming::csv_manifest;
  throw InvalidArgument("unknown dataset naming '" + s + "'");
}

namespace {

Dataset load_svc_directory(const fs::path& root) {
  static const std::regex pattern(R"(U(?:SER)?(\d+)S?_?(\d+)\.TXT)", std::regex::icase);
  Dataset dataset;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::smatch m;
    const auto name = path.filename().string();
    if (!std::regex_match(name, m, pattern)) continue;
    auto sig = read_signature_file(path);
    const int sample = std::stoi(m[2].str());
    sig.client_id = m[1].str();
    sig.sample_index = sample;
    sig.label = sample <= 20 ? SampleLabel::genuine : SampleLabel::skilled_forgery;
    dataset.add(std::move(sig));
  }
  return dataset;
}

}  // namespace

Dataset load_manifest(const fs::path& manifest_path) {
  const auto text = read_text_file(manifest_path);
  const auto base = manifest_path.parent_path();
  Dataset dataset;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json entry;
    try {
      entry = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(manifest_path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    try {
      const fs::path rel = entry.at("path").get<std::string>();
      auto sig = read_signature_file(rel.is_absolute() ? rel : base / rel);
      sig.client_id = entry.at("client").get<std::string>();
      sig.label = label_from_string(entry.at("label").get<std::string>());
      sig.sample_index = entry.at("sample_index").get<int>();
      dataset.add(std::move(sig));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(manifest_path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return dataset;
}

Dataset load_dataset(const fs::path& root, Naming naming) {
  if (!fs::is_directory(root)) throw IoError("not a directory: " + root.string());
  Dataset dataset = naming == Naming::svc ? load_svc_directory(root)
                                          : load_manifest(root / "manifest.jsonl");
  if (dataset.client_count() == 0) {
    throw InvalidArgument("no signatures found in " + root.string());
  }
  dataset.validate();
  return dataset;
}

void write_manifest_dataset(const Dataset& dataset, const fs::path& root) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create " + root.string() + ": " + ec.message());
  std::ostringstream manifest;
  for (const auto& [id, c] : dataset.clients()) {
    for (const auto* list : {&c.genuine, &c.forgeries}) {
      for (const auto& s : *list) {
        const std::string file = id + "_" + (s.label == SampleLabel::genuine ? "g" : "f") +
                                 std::to_string(s.sample_index) + ".csv";
        write_text_file(root / file, to_generic_csv(s));
        nlohmann::json entry = {{"path", file},
                                {"client", id},
                                {"label", to_string(s.label)},
                                {"sample_index", s.sample_index}};
        manifest << entry.dump() << '\n';
      }
    }
  }
  write_text_file(root / "manifest.jsonl", manifest.str());
}

TemplatePool pool_from_string(const std::string& s) {
  if (s == "first_10" || s == "first10") return TemplatePool::first_10;
  if (s == "all") return TemplatePool::all;
  throw InvalidArgument("unknown template pool '" + s + "'");
}

Split split_templates(const Dataset& dataset, const SplitOptions& options, std::uint64_t seed) {
  if (options.n_templates == 0) throw InvalidArgument("n_templates must be positive");
  Split split;
  split.seed = seed;
  Rng rng(seed);
  // Clients are visited in key order so the draw sequence is reproducible.
  for (const auto& [id, samples] : dataset.clients()) {
    const std::size_t pool_size = options.pool == TemplatePool::first_10
                                      ? std::min<std::size_t>(10, samples.genuine.size())
                                      : samples.genuine.size();
    if (options.n_templates > pool_size) {
      throw InvalidArgument("client '" + id + "': " + std::to_string(options.n_templates) +
                            " templates requested but pool has " + std::to_string(pool_size));
    }
    auto picks = rng.sample_without_replacement(pool_size, options.n_templates);
    std::sort(picks.begin(), picks.end());

    ClientSplit cs;
    std::vector<bool> used(samples.genuine.size(), false);
    for (auto i : picks) {
      used[i] = true;
      cs.templates.push_back(&samples.genuine[i]);
    }
    for (std::size_t i = 0; i < samples.genuine.size(); ++i) {
      if (!used[i]) cs.test.push_back(&samples.genuine[i]);
    }

    std::vector<bool> forgery_used(samples.forgeries.size(), false);
    if (options.select_train_forgeries) {
      const auto k = std::min(options.n_templates, samples.forgeries.size());
      auto fpicks = rng.sample_without_replacement(samples.forgeries.size(), k);
      std::sort(fpicks.begin(), fpicks.end());
      for (auto i : fpicks) {
        forgery_used[i] = true;
        cs.train_forgeries.push_back(&samples.forgeries[i]);
      }
    }
    for (std::size_t i = 0; i < samples.forgeries.size(); ++i) {
      if (!forgery_used[i]) cs.test.push_back(&samples.forgeries[i]);
    }
    split.clients.emplace(id, std::move(cs));
  }
  return split;
}

}  // namespace sigverify
