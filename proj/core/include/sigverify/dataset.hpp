#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sigverify/signature.hpp"

namespace sigverify {

struct ClientSamples {
  std::vector<OnlineSignature> genuine;    // ordered by sample_index
  std::vector<OnlineSignature> forgeries;  // ordered by sample_index
};

/// Immutable after construction; keyed by client id.
class Dataset {
 public:
  Dataset() = default;

  /// Adds a signature under its own client_id. Keeps per-client lists
  /// sorted by sample_index.
  void add(OnlineSignature sig);

  /// Throws InvalidArgument if the dataset is empty or a client has no
  /// genuine samples.
  void validate() const;

  const std::map<std::string, ClientSamples>& clients() const { return clients_; }
  const ClientSamples& client(const std::string& id) const;
  std::size_t client_count() const { return clients_.size(); }
  std::size_t signature_count() const;

  /// Union of two datasets; client ids must not collide.
  static Dataset merge(const Dataset& a, const Dataset& b);

 private:
  std::map<std::string, ClientSamples> clients_;
};

enum class Naming {
  svc,          // USER<c>_<s>.TXT, s in 1..20 genuine, 21..40 forgery
  csv_manifest  // manifest.jsonl listing path, client, label, sample_index
};

Naming naming_from_string(const std::string& s);

Dataset load_dataset(const std::filesystem::path& root, Naming naming);

/// One JSON object per line:
///   {"path": "...", "client": "...", "label": "genuine", "sample_index": 3}
/// Paths are relative to the manifest's directory.
Dataset load_manifest(const std::filesystem::path& manifest_path);

/// Writes every signature as generic CSV plus a manifest.jsonl.
void write_manifest_dataset(const Dataset& dataset, const std::filesystem::path& root);

enum class TemplatePool { first_10, all };

TemplatePool pool_from_string(const std::string& s);

struct ClientSplit {
  std::vector<const OnlineSignature*> templates;
  std::vector<const OnlineSignature*> train_forgeries;
  std::vector<const OnlineSignature*> test;  // genuine and forgeries, labels on the signatures
};

/// Non-owning view over a Dataset; the dataset must outlive the split.
struct Split {
  std::map<std::string, ClientSplit> clients;
  std::uint64_t seed = 0;
};

struct SplitOptions {
  std::size_t n_templates = 5;
  TemplatePool pool = TemplatePool::first_10;
  bool select_train_forgeries = false;  // RNN protocol: N forgeries per client
};

Split split_templates(const Dataset& dataset, const SplitOptions& options, std::uint64_t seed);

}  // namespace sigverify
