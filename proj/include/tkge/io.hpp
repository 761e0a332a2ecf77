// File formats.
//
// Tuple file: tab-separated `s_label  r_label  o_label  t_day` lines.
// Entity-type sidecar: `label  etype` lines.
// Lines starting with '#' are provenance headers and are skipped on read.
// Splits persist as train.tsv / valid.tsv / test.tsv plus entities.tsv.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "tkge/graph.hpp"
#include "tkge/splits.hpp"
#include "tkge/types.hpp"

namespace tkge::io {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return in;
}

inline void write_tuples(const std::filesystem::path& path,
                         const std::vector<LabeledQuadruple>& tuples,
                         const std::string& provenance = {}) {
  auto out = open_out(path);
  if (!provenance.empty()) out << "# " << provenance << "\n";
  for (const auto& q : tuples) {
    out << q.subject << '\t' << q.relation << '\t' << q.object << '\t' << q.t << '\n';
  }
}

inline std::vector<LabeledQuadruple> read_tuples(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<LabeledQuadruple> tuples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_tabs(line);
    if (cols.size() != 4) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected 4 tab-separated columns");
    }
    LabeledQuadruple q;
    q.subject = cols[0];
    q.relation = cols[1];
    q.object = cols[2];
    q.t = static_cast<Timestamp>(std::stol(cols[3]));
    tuples.push_back(std::move(q));
  }
  return tuples;
}

inline void write_entity_types(const std::filesystem::path& path, const TemporalKG& kg,
                               const std::string& provenance = {}) {
  auto out = open_out(path);
  if (!provenance.empty()) out << "# " << provenance << "\n";
  for (std::size_t i = 0; i < kg.num_entities(); ++i) {
    out << kg.entities().label_of(static_cast<EntityId>(i)) << '\t'
        << entity_type_name(kg.entity_type(static_cast<EntityId>(i))) << '\n';
  }
}

inline void write_entity_types(const std::filesystem::path& path,
                               const std::unordered_map<std::string, EntityType>& types,
                               const std::string& provenance = {}) {
  auto out = open_out(path);
  if (!provenance.empty()) out << "# " << provenance << "\n";
  for (const auto& [label, type] : types) {
    out << label << '\t' << entity_type_name(type) << '\n';
  }
}

inline std::unordered_map<std::string, EntityType> read_entity_types(
    const std::filesystem::path& path) {
  auto in = open_in(path);
  std::unordered_map<std::string, EntityType> types;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_tabs(line);
    if (cols.size() != 2) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected 2 tab-separated columns");
    }
    auto type = parse_entity_type(cols[1]);
    if (!type) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": unknown entity type '" + cols[1] + "'");
    }
    types.emplace(cols[0], *type);
  }
  return types;
}

inline std::vector<LabeledQuadruple> to_labeled(const TemporalKG& kg,
                                                const std::vector<Quadruple>& quads) {
  std::vector<LabeledQuadruple> out;
  out.reserve(quads.size());
  for (const Quadruple& q : quads) {
    out.push_back({kg.entities().label_of(q.subject), kg.relations().label_of(q.relation),
                   kg.entities().label_of(q.object), q.t});
  }
  return out;
}

inline void save_kg(const std::filesystem::path& dir, const TemporalKG& kg,
                    const std::string& provenance = {}) {
  std::filesystem::create_directories(dir);
  write_tuples(dir / "tuples.tsv", to_labeled(kg, kg.quadruples()), provenance);
  write_entity_types(dir / "entities.tsv", kg, provenance);
}

inline TemporalKG load_kg(const std::filesystem::path& tuples_path,
                          const std::filesystem::path& types_path) {
  auto tuples = read_tuples(tuples_path);
  auto types = read_entity_types(types_path);
  return build_graph(tuples, types);
}

inline void save_split(const std::filesystem::path& dir, const TemporalKG& kg,
                       const DatasetSplit& split, const std::string& provenance = {}) {
  std::filesystem::create_directories(dir);
  write_tuples(dir / "train.tsv", to_labeled(kg, split.train), provenance);
  write_tuples(dir / "valid.tsv", to_labeled(kg, split.validation), provenance);
  write_tuples(dir / "test.tsv", to_labeled(kg, split.test), provenance);
  write_entity_types(dir / "entities.tsv", kg, provenance);
  auto mode = open_out(dir / "mode.txt");
  mode << (split.mode == SplitMode::interpolated ? "interpolated" : "extrapolated") << "\n";
}

struct LoadedSplit {
  TemporalKG kg;  // built from train + validation + test, train-first order
  DatasetSplit split;
};

// Loads a persisted split. The KG vocabulary is rebuilt from the three tuple
// lists in train, validation, test order, so id assignment is reproducible.
inline LoadedSplit load_split(const std::filesystem::path& dir) {
  auto train = read_tuples(dir / "train.tsv");
  auto valid = read_tuples(dir / "valid.tsv");
  auto test = read_tuples(dir / "test.tsv");
  auto types = read_entity_types(dir / "entities.tsv");

  std::vector<LabeledQuadruple> all;
  all.reserve(train.size() + valid.size() + test.size());
  all.insert(all.end(), train.begin(), train.end());
  all.insert(all.end(), valid.begin(), valid.end());
  all.insert(all.end(), test.begin(), test.end());

  LoadedSplit out;
  out.kg = build_graph(all, types);

  auto to_ids = [&](const std::vector<LabeledQuadruple>& src) {
    std::vector<Quadruple> quads;
    quads.reserve(src.size());
    for (const auto& lq : src) {
      Quadruple q;
      q.subject = *out.kg.entities().id_of(lq.subject);
      q.relation = *out.kg.relations().id_of(lq.relation);
      q.object = *out.kg.entities().id_of(lq.object);
      q.t = lq.t;
      quads.push_back(q);
    }
    return quads;
  };
  out.split.train = to_ids(train);
  out.split.validation = to_ids(valid);
  out.split.test = to_ids(test);

  out.split.mode = SplitMode::interpolated;
  std::ifstream mode(dir / "mode.txt");
  std::string mode_str;
  if (mode && std::getline(mode, mode_str) && mode_str == "extrapolated") {
    out.split.mode = SplitMode::extrapolated;
  }
  return out;
}

}  // namespace tkge::io
