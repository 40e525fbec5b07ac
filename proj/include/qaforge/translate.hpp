#pragma once

// Pluggable sentence-level translation providers. The NMT model itself lives
// out of process behind this contract; the toolkit ships an identity
// provider (test oracle), a JSONL file provider, and an HTTP client
// implementing the POST /translate wire protocol with bounded retries.
// Batches are deduplicated and memoized through a persistent JSONL cache so
// large runs are resumable.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "qaforge/errors.hpp"
#include "qaforge/ioutil.hpp"

namespace qaforge::translate {

struct TranslationUnit {
  std::string id;          // stable, unique within a batch
  std::string source_text; // expected pre-trimmed
  std::string source_lang; // FLORES-style code, passed through opaquely
  std::string target_lang;
};

struct TranslationResult {
  std::string id;
  std::string target_text; // may be empty; downstream treats that as failure
};

class TranslationProvider {
public:
  virtual ~TranslationProvider() = default;

  virtual std::string name() const = 0;

  std::vector<TranslationResult> translate(std::span<const TranslationUnit> units) {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return do_translate(units);
  }

  // Number of provider invocations, for cache-soundness checks.
  std::uint64_t calls() const { return calls_.load(std::memory_order_relaxed); }

protected:
  virtual std::vector<TranslationResult> do_translate(std::span<const TranslationUnit>) = 0;

private:
  std::atomic<std::uint64_t> calls_{0};
};

using ProviderHandle = std::shared_ptr<TranslationProvider>;

class IdentityProvider final : public TranslationProvider {
public:
  std::string name() const override { return "identity"; }

protected:
  std::vector<TranslationResult> do_translate(std::span<const TranslationUnit> units) override {
    std::vector<TranslationResult> out;
    out.reserve(units.size());
    for (const TranslationUnit& u : units) out.push_back({u.id, u.source_text});
    return out;
  }
};

inline ProviderHandle identity_provider() { return std::make_shared<IdentityProvider>(); }

// Resolves by exact source_text match against a prepared pair file.
// File format: JSONL, {"src": string, "tgt": string, "src_lang": string,
// "tgt_lang": string} per line.
class FileProvider final : public TranslationProvider {
public:
  explicit FileProvider(const std::filesystem::path& path) : path_(path.string()) {
    std::string data = io::read_file(path);
    io::for_each_line(data, [&](std::string_view line, std::size_t lineno) {
      if (line.empty()) return;
      nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
      if (obj.is_discarded() || !obj.is_object() || !obj.contains("src") || !obj.contains("tgt"))
        throw ParseError(path.string() + ":" + std::to_string(lineno + 1) +
                         ": expected {\"src\", \"tgt\", \"src_lang\", \"tgt_lang\"}");
      table_[obj.at("src").get<std::string>()] = obj.at("tgt").get<std::string>();
    });
  }

  std::string name() const override { return "file:" + path_; }

protected:
  std::vector<TranslationResult> do_translate(std::span<const TranslationUnit> units) override {
    std::vector<TranslationResult> out;
    out.reserve(units.size());
    for (const TranslationUnit& u : units) {
      auto it = table_.find(u.source_text);
      if (it == table_.end())
        throw UnresolvedSource("file provider has no entry for: " + u.source_text);
      out.push_back({u.id, it->second});
    }
    return out;
  }

private:
  std::string path_;
  std::unordered_map<std::string, std::string> table_;
};

inline ProviderHandle file_provider(const std::filesystem::path& path) {
  return std::make_shared<FileProvider>(path);
}

// Persistent translation memo, keyed by a content hash of
// (provider, source language, target language, source text). Storage is an
// append-only JSONL file; concurrent readers share the in-memory map while
// appends are serialized.
class TranslationCache {
public:
  TranslationCache() = default; // in-memory only

  explicit TranslationCache(const std::filesystem::path& file) : file_(file) {
    if (std::filesystem::exists(file)) {
      std::string data = io::read_file(file);
      io::for_each_line(data, [&](std::string_view line, std::size_t) {
        if (line.empty()) return;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.contains("key") || !obj.contains("tgt"))
          return; // tolerate a torn final line from an interrupted run
        map_[obj.at("key").get<std::string>()] = obj.at("tgt").get<std::string>();
      });
    } else if (file.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(file.parent_path(), ec);
    }
  }

  static std::string key(std::string_view provider, const TranslationUnit& u) {
    std::string material;
    material.reserve(provider.size() + u.source_text.size() + u.source_lang.size() +
                     u.target_lang.size() + 3);
    material += provider;
    material.push_back('\x1f');
    material += u.source_lang;
    material.push_back('\x1f');
    material += u.target_lang;
    material.push_back('\x1f');
    material += u.source_text;
    return io::fnv1a64_hex(material);
  }

  std::optional<std::string> lookup(const std::string& key) const {
    std::shared_lock lock(mutex_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  void store(const std::string& key, std::string_view provider, const TranslationUnit& unit,
             const std::string& target) {
    std::unique_lock lock(mutex_);
    if (!map_.emplace(key, target).second) return;
    if (file_.empty()) return;
    nlohmann::ordered_json rec;
    rec["key"] = key;
    rec["provider"] = std::string(provider);
    rec["src_lang"] = unit.source_lang;
    rec["tgt_lang"] = unit.target_lang;
    rec["src"] = unit.source_text;
    rec["tgt"] = target;
    std::ofstream out(file_, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot append to cache: " + file_.string());
    out << rec.dump() << '\n';
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
  }

private:
  std::filesystem::path file_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::string> map_;
};

// Translates a batch through the provider, deduplicating identical
// (text, language pair) units and consulting the cache first. Returns
// exactly one result per unit, in input order, matched by id.
inline std::vector<TranslationResult> translate_batch(std::span<const TranslationUnit> units,
                                                      const ProviderHandle& provider,
                                                      TranslationCache* cache = nullptr,
                                                      int jobs = 1) {
  {
    std::unordered_set<std::string_view> ids;
    for (const TranslationUnit& u : units)
      if (!ids.insert(u.id).second)
        throw std::invalid_argument("translate_batch: duplicate unit id: " + u.id);
  }

  const std::string provider_name = provider->name();
  std::unordered_map<std::string, std::string> resolved; // key -> target
  std::vector<TranslationUnit> pending;                  // one representative per key
  std::unordered_set<std::string> pending_keys;

  std::vector<std::string> keys;
  keys.reserve(units.size());
  for (const TranslationUnit& u : units) {
    std::string key = TranslationCache::key(provider_name, u);
    keys.push_back(key);
    if (resolved.count(key) || pending_keys.count(key)) continue;
    if (cache) {
      if (auto hit = cache->lookup(key)) {
        resolved.emplace(key, *hit);
        continue;
      }
    }
    pending_keys.insert(key);
    TranslationUnit rep = u;
    rep.id = key; // providers echo ids; keys are unique by construction
    pending.push_back(std::move(rep));
  }

  if (!pending.empty()) {
    const auto run_chunk = [&](std::span<const TranslationUnit> chunk,
                               std::vector<TranslationResult>& out) {
      out = provider->translate(chunk);
    };

    std::vector<std::vector<TranslationResult>> chunk_results;
    if (jobs <= 1 || pending.size() < 2) {
      chunk_results.resize(1);
      run_chunk(pending, chunk_results[0]);
    } else {
      int workers = std::min<int>(jobs, static_cast<int>(pending.size()));
      std::size_t chunk = (pending.size() + workers - 1) / workers;
      chunk_results.resize(static_cast<std::size_t>(workers));
      std::vector<std::thread> threads;
      std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
          try {
            std::size_t begin = static_cast<std::size_t>(w) * chunk;
            std::size_t end = std::min(begin + chunk, pending.size());
            run_chunk(std::span(pending).subspan(begin, end - begin), chunk_results[w]);
          } catch (...) {
            errors[static_cast<std::size_t>(w)] = std::current_exception();
          }
        });
      }
      for (auto& t : threads) t.join();
      for (auto& err : errors)
        if (err) std::rethrow_exception(err);
    }

    std::unordered_map<std::string, std::string> fresh;
    for (const auto& results : chunk_results)
      for (const TranslationResult& r : results) fresh.emplace(r.id, r.target_text);

    for (const TranslationUnit& rep : pending) {
      auto it = fresh.find(rep.id);
      if (it == fresh.end())
        throw MissingResult("provider returned no result for unit: " + rep.id);
      if (cache) cache->store(rep.id, provider_name, rep, it->second);
      resolved.emplace(rep.id, it->second);
    }
  }

  std::vector<TranslationResult> out;
  out.reserve(units.size());
  for (std::size_t k = 0; k < units.size(); ++k) {
    auto it = resolved.find(keys[k]);
    if (it == resolved.end())
      throw MissingResult("no translation resolved for unit: " + units[k].id);
    out.push_back({units[k].id, it->second});
  }
  return out;
}

} // namespace qaforge::translate
