#pragma once

// SQuAD v1.1 JSON dataset structures and I/O:
// {"version": string, "data": [{"title", "paragraphs": [{"context",
//   "qas": [{"id", "question", "answers": [{"text", "answer_start"}]}]}]}]}

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "qaforge/errors.hpp"
#include "qaforge/ioutil.hpp"

namespace qaforge::squad {

struct Answer {
  std::string text;
  std::int64_t answer_start = 0;
};

struct Qa {
  std::string id;
  std::string question;
  std::vector<Answer> answers;
};

struct Paragraph {
  std::string context;
  std::vector<Qa> qas;
};

struct Article {
  std::string title;
  std::vector<Paragraph> paragraphs;
};

struct Dataset {
  std::string version = "1.1";
  std::vector<Article> articles;

  std::size_t sample_count() const {
    std::size_t n = 0;
    for (const Article& a : articles)
      for (const Paragraph& p : a.paragraphs) n += p.qas.size();
    return n;
  }
};

inline Dataset parse_dataset(const nlohmann::json& root) {
  if (!root.is_object() || !root.contains("data") || !root.at("data").is_array())
    throw ParseError("dataset: expected top-level object with a \"data\" array");
  Dataset ds;
  if (root.contains("version") && root.at("version").is_string())
    ds.version = root.at("version").get<std::string>();
  try {
    for (const auto& ja : root.at("data")) {
      Article art;
      art.title = ja.value("title", std::string());
      for (const auto& jp : ja.at("paragraphs")) {
        Paragraph par;
        par.context = jp.at("context").get<std::string>();
        for (const auto& jq : jp.at("qas")) {
          Qa qa;
          qa.id = jq.at("id").get<std::string>();
          qa.question = jq.at("question").get<std::string>();
          for (const auto& jans : jq.at("answers")) {
            Answer ans;
            ans.text = jans.at("text").get<std::string>();
            ans.answer_start = jans.at("answer_start").get<std::int64_t>();
            qa.answers.push_back(std::move(ans));
          }
          par.qas.push_back(std::move(qa));
        }
        art.paragraphs.push_back(std::move(par));
      }
      ds.articles.push_back(std::move(art));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("dataset: malformed SQuAD structure: ") + e.what());
  }
  return ds;
}

inline Dataset load_dataset(const std::filesystem::path& path) {
  nlohmann::json root = nlohmann::json::parse(io::read_file(path), nullptr, false);
  if (root.is_discarded()) throw ParseError("dataset: invalid JSON in " + path.string());
  return parse_dataset(root);
}

inline nlohmann::ordered_json to_json(const Dataset& ds) {
  nlohmann::ordered_json root;
  root["version"] = ds.version;
  auto& data = root["data"] = nlohmann::ordered_json::array();
  for (const Article& art : ds.articles) {
    nlohmann::ordered_json ja;
    ja["title"] = art.title;
    auto& jps = ja["paragraphs"] = nlohmann::ordered_json::array();
    for (const Paragraph& par : art.paragraphs) {
      nlohmann::ordered_json jp;
      jp["context"] = par.context;
      auto& jqs = jp["qas"] = nlohmann::ordered_json::array();
      for (const Qa& qa : par.qas) {
        nlohmann::ordered_json jq;
        jq["id"] = qa.id;
        jq["question"] = qa.question;
        auto& jas = jq["answers"] = nlohmann::ordered_json::array();
        for (const Answer& ans : qa.answers) {
          nlohmann::ordered_json jans;
          jans["text"] = ans.text;
          jans["answer_start"] = ans.answer_start;
          jas.push_back(std::move(jans));
        }
        jqs.push_back(std::move(jq));
      }
      jps.push_back(std::move(jp));
    }
    data.push_back(std::move(ja));
  }
  return root;
}

inline void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
  io::write_file(path, to_json(ds).dump(1) + "\n");
}

} // namespace qaforge::squad
