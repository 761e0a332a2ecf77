// Forge event ingestion: newline-delimited JSON event records in, typed
// quadruples out, driven by a rule table shipped as data.
//
// Each rule binds (event_type, action) to a head role, a relation code, and
// a tail role. Roles name payload locations (actor, issue, pull_request, ...)
// and resolve to forge-global labels:
//
//   User                      login
//   Repository                owner/name
//   Issue                     owner/name#number
//   PullRequest               owner/name!number
//   IssueComment              owner/name#number/c<id>
//   PullRequestReview         owner/name!number/r<id>
//   PullRequestReviewComment  owner/name!number/rc<id>
//   CommitComment             owner/name/cc<id>
//
// Events carrying several assignees or requested reviewers emit one tuple
// per target. An event matching no rule yields no tuples and is counted,
// not an error.

#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "tkge/types.hpp"

#ifdef TKGE_HAVE_ZLIB
#include <zlib.h>
#endif

namespace tkge::ingest {

using json = nlohmann::json;

// Days since 1970-01-01 for a calendar date (proleptic Gregorian).
inline std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

// Parses the date part of an ISO-8601 UTC instant ("2019-03-07T12:34:56Z"),
// truncating sub-day time. Returns nullopt on malformed input.
inline std::optional<std::int64_t> day_of_created_at(std::string_view s) {
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (s.size() > 10 && s[10] != 'T' && s[10] != ' ') return std::nullopt;
  auto digits = [&s](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  auto y = digits(0, 4), m = digits(5, 2), d = digits(8, 2);
  if (!y || !m || !d) return std::nullopt;
  if (*m < 1 || *m > 12 || *d < 1 || *d > 31) return std::nullopt;
  return days_from_civil(*y, *m, *d);
}

struct RawEvent {
  std::string type;
  std::string action;  // empty when the payload carries none
  std::string created_at;
  std::int64_t day = 0;  // days since 1970-01-01
  json body;
};

struct ParseResult {
  std::vector<RawEvent> events;
  std::size_t skipped = 0;
};

// Reads newline-delimited JSON events; malformed lines are skipped and
// counted. A line is malformed when it is not a JSON object, has no event
// type, or its created_at does not parse to a valid instant.
inline ParseResult parse_events(std::istream& in) {
  ParseResult result;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      ++result.skipped;
      continue;
    }
    RawEvent ev;
    ev.type = j.value("type", "");
    ev.created_at = j.value("created_at", "");
    auto day = day_of_created_at(ev.created_at);
    if (ev.type.empty() || !day) {
      ++result.skipped;
      continue;
    }
    ev.day = *day;
    if (j.contains("payload") && j["payload"].is_object()) {
      ev.action = j["payload"].value("action", "");
    }
    ev.body = std::move(j);
    result.events.push_back(std::move(ev));
  }
  return result;
}

#ifdef TKGE_HAVE_ZLIB
inline std::string gunzip(const std::string& compressed) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw std::runtime_error("gunzip: init failed");
  std::string out;
  std::vector<char> buf(1 << 16);
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());
  int ret = Z_OK;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buf.data());
    zs.avail_out = static_cast<uInt>(buf.size());
    ret = inflate(&zs, Z_NO_FLUSH);
    if (ret != Z_OK && ret != Z_STREAM_END) {
      inflateEnd(&zs);
      throw std::runtime_error("gunzip: corrupt stream");
    }
    out.append(buf.data(), buf.size() - zs.avail_out);
  } while (ret != Z_STREAM_END && zs.avail_in > 0);
  inflateEnd(&zs);
  return out;
}
#endif

// Loads an event file, transparently inflating gzip input.
inline ParseResult parse_events_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open events file: " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (content.size() >= 2 && static_cast<unsigned char>(content[0]) == 0x1f &&
      static_cast<unsigned char>(content[1]) == 0x8b) {
#ifdef TKGE_HAVE_ZLIB
    content = gunzip(content);
#else
    throw std::runtime_error("gzip input but zlib support is not built: " + path.string());
#endif
  }
  std::istringstream stream(std::move(content));
  return parse_events(stream);
}

struct ExtractionRule {
  std::string event_type;
  std::string action;  // "*" matches any
  std::string head_role;
  EntityType head_type;
  std::string relation;
  std::string tail_role;
  EntityType tail_type;
  bool in_default_subset = false;
};

inline const std::unordered_set<std::string>& known_roles() {
  static const std::unordered_set<std::string> roles = {
      "actor",         "member",        "repo",           "forkee",
      "issue",         "pull_request",  "issue_comment",  "review",
      "review_comment", "commit_comment", "assignee",      "pr_assignee",
      "requested_reviewer",
  };
  return roles;
}

// Validates a relation code against the underscore grammar: the first
// component is the head entity-type code and the last the tail entity-type
// code. Three-component codes (one exists in the shipped table) leave the
// tail implicit and only the head is checked.
inline void validate_relation_code(const ExtractionRule& rule) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = rule.relation.find('_', start);
    if (pos == std::string::npos) {
      parts.push_back(rule.relation.substr(start));
      break;
    }
    parts.push_back(rule.relation.substr(start, pos - start));
    start = pos + 1;
  }
  if (parts.size() < 3) {
    throw std::runtime_error("rule table: relation code too short: " + rule.relation);
  }
  auto head = parse_entity_type(parts.front());
  if (!head || *head != rule.head_type) {
    throw std::runtime_error("rule table: head type does not match code grammar: " + rule.relation);
  }
  if (parts.size() >= 4) {
    auto tail = parse_entity_type(parts.back());
    if (!tail || *tail != rule.tail_type) {
      throw std::runtime_error("rule table: tail type does not match code grammar: " +
                               rule.relation);
    }
  }
}

class RuleTable {
 public:
  void add(ExtractionRule rule) {
    if (!known_roles().count(rule.head_role) || !known_roles().count(rule.tail_role)) {
      throw std::runtime_error("rule table: unknown role in rule " + rule.relation);
    }
    validate_relation_code(rule);
    if (!codes_.insert(rule.relation).second) {
      throw std::runtime_error("rule table: duplicate relation code " + rule.relation);
    }
    by_event_[rule.event_type].push_back(rules_.size());
    rules_.push_back(std::move(rule));
  }

  const std::vector<ExtractionRule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool has_code(const std::string& code) const { return codes_.count(code) > 0; }

  std::vector<const ExtractionRule*> match(const std::string& event_type,
                                           const std::string& action) const {
    std::vector<const ExtractionRule*> out;
    auto it = by_event_.find(event_type);
    if (it == by_event_.end()) return out;
    for (std::size_t i : it->second) {
      const ExtractionRule& r = rules_[i];
      if (r.action == "*" || r.action == action) out.push_back(&r);
    }
    return out;
  }

  std::unordered_set<std::string> default_subset() const {
    std::unordered_set<std::string> out;
    for (const auto& r : rules_) {
      if (r.in_default_subset) out.insert(r.relation);
    }
    return out;
  }

 private:
  std::vector<ExtractionRule> rules_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_event_;
  std::unordered_set<std::string> codes_;
};

// Rule file: tab-separated
//   event_type  action  head_role  head_type  relation  tail_role  tail_type  default
// with '#' comment lines.
inline RuleTable build_rule_table(std::istream& in, const std::string& origin = "<stream>") {
  RuleTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      auto pos = line.find('\t', start);
      if (pos == std::string::npos) {
        cols.push_back(line.substr(start));
        break;
      }
      cols.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    if (cols.size() != 8) {
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected 8 tab-separated columns");
    }
    ExtractionRule rule;
    rule.event_type = cols[0];
    rule.action = cols[1];
    rule.head_role = cols[2];
    auto head = parse_entity_type(cols[3]);
    rule.relation = cols[4];
    rule.tail_role = cols[5];
    auto tail = parse_entity_type(cols[6]);
    if (!head || !tail) {
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": bad entity type");
    }
    rule.head_type = *head;
    rule.tail_type = *tail;
    rule.in_default_subset = cols[7] == "1";
    table.add(std::move(rule));
  }
  return table;
}

inline RuleTable build_rule_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rule table: " + path.string());
  return build_rule_table(in, path.string());
}

struct ExtractedTuple {
  std::string head_label;
  EntityType head_type;
  std::string relation;
  std::string tail_label;
  EntityType tail_type;
  std::int64_t day = 0;  // days since 1970-01-01; re-based by the caller

  friend bool operator==(const ExtractedTuple&, const ExtractedTuple&) = default;
};

namespace detail {

inline std::optional<std::string> login_of(const json& j) {
  if (j.is_object()) {
    if (j.contains("login") && j["login"].is_string()) return j["login"].get<std::string>();
    if (j.contains("id") && j["id"].is_number_integer()) {
      return "user" + std::to_string(j["id"].get<std::int64_t>());
    }
  }
  if (j.is_string()) return j.get<std::string>();
  return std::nullopt;
}

inline std::optional<std::string> repo_label(const json& body) {
  if (body.contains("repo") && body["repo"].is_object() && body["repo"].contains("name") &&
      body["repo"]["name"].is_string()) {
    return body["repo"]["name"].get<std::string>();
  }
  return std::nullopt;
}

inline std::optional<std::string> numbered_label(const json& body, const char* key, char sep) {
  auto repo = repo_label(body);
  if (!repo) return std::nullopt;
  const json& payload = body.contains("payload") ? body["payload"] : json();
  if (!payload.is_object() || !payload.contains(key) || !payload[key].is_object()) {
    return std::nullopt;
  }
  const json& obj = payload[key];
  if (!obj.contains("number") || !obj["number"].is_number_integer()) return std::nullopt;
  return *repo + sep + std::to_string(obj["number"].get<std::int64_t>());
}

inline std::optional<std::string> id_suffixed(const std::optional<std::string>& base,
                                              const json& payload, const char* key,
                                              const char* suffix) {
  if (!base || !payload.is_object() || !payload.contains(key) || !payload[key].is_object()) {
    return std::nullopt;
  }
  const json& obj = payload[key];
  if (!obj.contains("id") || !obj["id"].is_number_integer()) return std::nullopt;
  return *base + "/" + suffix + std::to_string(obj["id"].get<std::int64_t>());
}

// Resolves a role to zero or more labels. Multi-valued roles (assignees,
// requested reviewers) return one label per target.
inline std::vector<std::string> resolve_role(const RawEvent& ev, const std::string& role) {
  const json& body = ev.body;
  const json payload = body.contains("payload") && body["payload"].is_object()
                           ? body["payload"]
                           : json::object();
  auto one = [](std::optional<std::string> v) {
    return v ? std::vector<std::string>{*v} : std::vector<std::string>{};
  };

  if (role == "actor") {
    if (body.contains("actor")) return one(login_of(body["actor"]));
    return {};
  }
  if (role == "member") {
    if (payload.contains("member")) return one(login_of(payload["member"]));
    return {};
  }
  if (role == "repo") return one(repo_label(body));
  if (role == "forkee") {
    if (payload.contains("forkee") && payload["forkee"].is_object() &&
        payload["forkee"].contains("full_name") && payload["forkee"]["full_name"].is_string()) {
      return {payload["forkee"]["full_name"].get<std::string>()};
    }
    return {};
  }
  if (role == "issue") return one(numbered_label(body, "issue", '#'));
  if (role == "pull_request") return one(numbered_label(body, "pull_request", '!'));
  if (role == "issue_comment") {
    return one(id_suffixed(numbered_label(body, "issue", '#'), payload, "comment", "c"));
  }
  if (role == "review") {
    return one(id_suffixed(numbered_label(body, "pull_request", '!'), payload, "review", "r"));
  }
  if (role == "review_comment") {
    return one(id_suffixed(numbered_label(body, "pull_request", '!'), payload, "comment", "rc"));
  }
  if (role == "commit_comment") {
    return one(id_suffixed(repo_label(body), payload, "comment", "cc"));
  }
  if (role == "assignee" || role == "pr_assignee") {
    const char* parent = role == "assignee" ? "issue" : "pull_request";
    if (payload.contains("assignee")) {
      auto v = login_of(payload["assignee"]);
      if (v) return {*v};
    }
    if (payload.contains(parent) && payload[parent].is_object()) {
      const json& p = payload[parent];
      if (p.contains("assignee")) {
        auto v = login_of(p["assignee"]);
        if (v) return {*v};
      }
      if (p.contains("assignees") && p["assignees"].is_array()) {
        std::vector<std::string> out;
        for (const auto& a : p["assignees"]) {
          auto v = login_of(a);
          if (v) out.push_back(*v);
        }
        return out;
      }
    }
    return {};
  }
  if (role == "requested_reviewer") {
    if (payload.contains("requested_reviewer")) {
      auto v = login_of(payload["requested_reviewer"]);
      if (v) return {*v};
    }
    if (payload.contains("pull_request") && payload["pull_request"].is_object()) {
      const json& p = payload["pull_request"];
      if (p.contains("requested_reviewers") && p["requested_reviewers"].is_array()) {
        std::vector<std::string> out;
        for (const auto& a : p["requested_reviewers"]) {
          auto v = login_of(a);
          if (v) out.push_back(*v);
        }
        return out;
      }
    }
    return {};
  }
  return {};
}

}  // namespace detail

// Applies every matching rule to one event; an event matching no rule (or
// whose payload lacks the role fields) yields an empty list.
inline std::vector<ExtractedTuple> extract(const RawEvent& event, const RuleTable& rules) {
  std::vector<ExtractedTuple> out;
  for (const ExtractionRule* rule : rules.match(event.type, event.action)) {
    auto heads = detail::resolve_role(event, rule->head_role);
    auto tails = detail::resolve_role(event, rule->tail_role);
    for (const auto& h : heads) {
      for (const auto& t : tails) {
        out.push_back({h, rule->head_type, rule->relation, t, rule->tail_type, event.day});
      }
    }
  }
  return out;
}

struct IngestReport {
  std::size_t events = 0;
  std::size_t skipped_lines = 0;
  std::size_t unmatched_events = 0;
  std::size_t tuples = 0;
  std::int64_t epoch_day = 0;  // day index 0 in the output
  std::map<std::string, std::size_t> per_relation;
};

struct IngestOutput {
  std::vector<LabeledQuadruple> tuples;
  std::unordered_map<std::string, EntityType> entity_types;
  IngestReport report;
};

// Full pipeline over parsed events: extract, optionally restrict to a
// relation subset, and re-base days so the earliest kept tuple is day 0.
inline IngestOutput ingest_events(std::span<const RawEvent> events, const RuleTable& rules,
                                  const std::unordered_set<std::string>* relation_subset = nullptr) {
  IngestOutput out;
  out.report.events = events.size();
  std::vector<ExtractedTuple> kept;
  for (const RawEvent& ev : events) {
    auto tuples = extract(ev, rules);
    if (tuples.empty()) {
      ++out.report.unmatched_events;
      continue;
    }
    bool any = false;
    for (auto& t : tuples) {
      if (relation_subset && !relation_subset->count(t.relation)) continue;
      any = true;
      kept.push_back(std::move(t));
    }
    if (!any) ++out.report.unmatched_events;
  }
  if (kept.empty()) return out;

  std::int64_t epoch = kept.front().day;
  for (const auto& t : kept) epoch = std::min(epoch, t.day);
  out.report.epoch_day = epoch;
  for (const auto& t : kept) {
    out.entity_types.emplace(t.head_label, t.head_type);
    out.entity_types.emplace(t.tail_label, t.tail_type);
    ++out.report.per_relation[t.relation];
    out.tuples.push_back({t.head_label, t.relation, t.tail_label,
                          static_cast<Timestamp>(t.day - epoch)});
  }
  out.report.tuples = out.tuples.size();
  return out;
}

}  // namespace tkge::ingest
