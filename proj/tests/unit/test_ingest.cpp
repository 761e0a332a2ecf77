#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <set>
#include <sstream>

#include "tkge/ingest.hpp"

using namespace tkge;
using namespace tkge::ingest;

namespace {

const char* kRulesPath = TKGE_DATA_DIR "/extraction_rules.tsv";
const char* kFixturePath = TKGE_DATA_DIR "/fixtures/events_10.jsonl";

RawEvent make_event(const std::string& text) {
  std::istringstream in(text);
  auto parsed = parse_events(in);
  REQUIRE(parsed.events.size() == 1);
  return parsed.events[0];
}

std::multiset<std::string> tuple_codes(const std::vector<ExtractedTuple>& tuples) {
  std::multiset<std::string> out;
  for (const auto& t : tuples) out.insert(t.relation);
  return out;
}

}  // namespace

TEST_CASE("day_of_created_at parses dates and rejects junk") {
  CHECK(day_of_created_at("1970-01-01T00:00:00Z") == 0);
  CHECK(day_of_created_at("1970-01-02T23:59:59Z") == 1);
  CHECK(day_of_created_at("2019-01-01T15:00:00Z") == 17897);
  CHECK(day_of_created_at("2019-03-01") == 17956);
  CHECK(!day_of_created_at(""));
  CHECK(!day_of_created_at("2019/01/01"));
  CHECK(!day_of_created_at("2019-13-01T00:00:00Z"));
  CHECK(!day_of_created_at("2019-01-4"));
  CHECK(!day_of_created_at("yesterday"));
}

TEST_CASE("parse_events on an empty stream") {
  std::istringstream in("");
  auto result = parse_events(in);
  CHECK(result.events.empty());
  CHECK(result.skipped == 0);
}

TEST_CASE("parse_events skips malformed lines with a counter") {
  std::istringstream in(
      "{\"type\":\"IssuesEvent\",\"created_at\":\"2019-01-01T00:00:00Z\",\"payload\":{\"action\":\"opened\"}}\n"
      "this is not json\n"
      "{\"type\":\"PushEvent\",\"created_at\":\"2019-01-02T00:00:00Z\"}\n"
      "{\"created_at\":\"2019-01-02T00:00:00Z\"}\n"
      "{\"type\":\"ForkEvent\",\"created_at\":\"not a date\"}\n"
      "{\"type\":\"WatchEvent\",\"created_at\":\"2019-01-03T00:00:00Z\",\"payload\":{\"action\":\"started\"}}\n");
  auto result = parse_events(in);
  CHECK(result.events.size() == 3);
  CHECK(result.skipped == 3);
  CHECK(result.events[0].type == "IssuesEvent");
  CHECK(result.events[0].action == "opened");
  CHECK(result.events[1].action == "");
  CHECK(result.events[2].type == "WatchEvent");
}

TEST_CASE("fixture file parses to 10 events in order") {
  auto result = parse_events_file(kFixturePath);
  CHECK(result.events.size() == 10);
  CHECK(result.skipped == 0);
  CHECK(result.events[0].type == "IssuesEvent");
  CHECK(result.events[0].action == "closed");
  CHECK(result.events[9].type == "MemberEvent");
}

TEST_CASE("shipped rule table has 80 rows and an 18-relation default subset") {
  auto table = build_rule_table(kRulesPath);
  CHECK(table.size() == 80);
  CHECK(table.default_subset().size() == 18);
  CHECK(table.has_code("U_SE_C_I"));
  CHECK(table.has_code("U_SO_C"));
  CHECK(table.has_code("U_HS_R_R"));
}

TEST_CASE("duplicate relation codes are rejected") {
  std::istringstream in(
      "IssuesEvent\topened\tactor\tU\tU_SE_O_I\tissue\tI\t1\n"
      "IssuesEvent\treopened\tactor\tU\tU_SE_O_I\tissue\tI\t0\n");
  CHECK_THROWS_WITH_AS(build_rule_table(in), doctest::Contains("duplicate"), std::runtime_error);
}

TEST_CASE("codes that contradict their declared types are rejected") {
  std::istringstream in("IssuesEvent\topened\tactor\tU\tI_SE_O_I\tissue\tI\t0\n");
  CHECK_THROWS_AS(build_rule_table(in), std::runtime_error);
  std::istringstream in2("IssuesEvent\topened\tactor\tU\tU_SE_O_R\tissue\tI\t0\n");
  CHECK_THROWS_AS(build_rule_table(in2), std::runtime_error);
}

TEST_CASE("issues closed event emits the two-tuple extraction") {
  auto table = build_rule_table(kRulesPath);
  auto ev = make_event(
      "{\"type\":\"IssuesEvent\",\"actor\":{\"id\":1,\"login\":\"alice\"},"
      "\"repo\":{\"name\":\"ms/vscode\"},\"payload\":{\"action\":\"closed\","
      "\"issue\":{\"number\":12}},\"created_at\":\"2019-01-02T10:15:00Z\"}");
  auto tuples = extract(ev, table);
  REQUIRE(tuples.size() == 2);
  CHECK(tuple_codes(tuples) == std::multiset<std::string>{"I_AO_C_R", "U_SE_C_I"});
  for (const auto& t : tuples) {
    if (t.relation == "U_SE_C_I") {
      CHECK(t.head_label == "alice");
      CHECK(t.head_type == EntityType::User);
      CHECK(t.tail_label == "ms/vscode#12");
      CHECK(t.tail_type == EntityType::Issue);
    } else {
      CHECK(t.head_label == "ms/vscode#12");
      CHECK(t.tail_label == "ms/vscode");
      CHECK(t.tail_type == EntityType::Repository);
    }
  }
}

TEST_CASE("fork event relates source repo to the forkee") {
  auto table = build_rule_table(kRulesPath);
  auto ev = make_event(
      "{\"type\":\"ForkEvent\",\"repo\":{\"name\":\"ms/vscode\"},"
      "\"payload\":{\"forkee\":{\"full_name\":\"bob/vscode\"}},"
      "\"created_at\":\"2019-01-03T12:30:00Z\"}");
  auto tuples = extract(ev, table);
  REQUIRE(tuples.size() == 1);
  CHECK(tuples[0].relation == "R_FO_R");
  CHECK(tuples[0].head_label == "ms/vscode");
  CHECK(tuples[0].tail_label == "bob/vscode");
}

TEST_CASE("no matching rule in a trimmed table yields an empty list") {
  std::istringstream trimmed("IssuesEvent\topened\tactor\tU\tU_SE_O_I\tissue\tI\t1\n");
  auto table = build_rule_table(trimmed);
  auto ev = make_event(
      "{\"type\":\"WatchEvent\",\"actor\":{\"login\":\"z\"},\"repo\":{\"name\":\"a/b\"},"
      "\"payload\":{\"action\":\"started\"},\"created_at\":\"2019-02-02T00:00:00Z\"}");
  CHECK(extract(ev, table).empty());
}

TEST_CASE("multiple assignees emit one tuple per target") {
  auto table = build_rule_table(kRulesPath);
  auto ev = make_event(
      "{\"type\":\"IssuesEvent\",\"actor\":{\"login\":\"boss\"},\"repo\":{\"name\":\"a/b\"},"
      "\"payload\":{\"action\":\"assigned\",\"issue\":{\"number\":3,"
      "\"assignees\":[{\"login\":\"w1\"},{\"login\":\"w2\"}]}},"
      "\"created_at\":\"2019-05-01T00:00:00Z\"}");
  auto tuples = extract(ev, table);
  // U_SE_A_I (actor), U_AO_A_I per assignee, I_AO_A_R
  CHECK(tuple_codes(tuples) ==
        std::multiset<std::string>{"I_AO_A_R", "U_AO_A_I", "U_AO_A_I", "U_SE_A_I"});
  std::multiset<std::string> assignees;
  for (const auto& t : tuples) {
    if (t.relation == "U_AO_A_I") assignees.insert(t.head_label);
  }
  CHECK(assignees == std::multiset<std::string>{"w1", "w2"});
}

TEST_CASE("extraction is deterministic and order independent across events") {
  auto table = build_rule_table(kRulesPath);
  auto parsed = parse_events_file(kFixturePath);
  std::vector<ExtractedTuple> forward, backward;
  for (const auto& ev : parsed.events) {
    auto t = extract(ev, table);
    forward.insert(forward.end(), t.begin(), t.end());
  }
  for (auto it = parsed.events.rbegin(); it != parsed.events.rend(); ++it) {
    auto t = extract(*it, table);
    backward.insert(backward.end(), t.begin(), t.end());
  }
  CHECK(forward.size() == backward.size());
  auto key = [](const ExtractedTuple& t) {
    return t.head_label + "|" + t.relation + "|" + t.tail_label + "|" + std::to_string(t.day);
  };
  std::multiset<std::string> a, b;
  for (const auto& t : forward) a.insert(key(t));
  for (const auto& t : backward) b.insert(key(t));
  CHECK(a == b);
}

TEST_CASE("every emitted relation code exists in the rule table") {
  auto table = build_rule_table(kRulesPath);
  auto parsed = parse_events_file(kFixturePath);
  for (const auto& ev : parsed.events) {
    for (const auto& t : extract(ev, table)) {
      CHECK(table.has_code(t.relation));
    }
  }
}

TEST_CASE("fixture ingest matches the hand-derived oracle") {
  auto table = build_rule_table(kRulesPath);
  auto parsed = parse_events_file(kFixturePath);
  auto out = ingest_events(parsed.events, table);

  // hand count: closed issue 2, opened issue 2, fork 1, watch 1, push 1,
  // issue comment 2, PR opened 2, PR assigned 3, review submitted 2,
  // member added 1 -> 17 tuples
  CHECK(out.tuples.size() == 17);
  CHECK(out.report.unmatched_events == 0);
  CHECK(out.report.per_relation.at("U_SE_C_I") == 1);
  CHECK(out.report.per_relation.at("I_AO_C_R") == 1);
  CHECK(out.report.per_relation.at("U_AO_A_P") == 1);
  CHECK(out.report.per_relation.at("P_AO_A_R") == 1);

  // epoch re-basing: earliest event is 2019-01-01
  CHECK(out.report.epoch_day == 17897);
  Timestamp lo = 100, hi = -1;
  for (const auto& q : out.tuples) {
    lo = std::min(lo, q.t);
    hi = std::max(hi, q.t);
  }
  CHECK(lo == 0);
  CHECK(hi == 4);

  CHECK(out.entity_types.at("alice") == EntityType::User);
  CHECK(out.entity_types.at("ms/vscode") == EntityType::Repository);
  CHECK(out.entity_types.at("ms/vscode#12") == EntityType::Issue);
  CHECK(out.entity_types.at("ms/vscode!20") == EntityType::PullRequest);
  CHECK(out.entity_types.at("ms/vscode#12/c501") == EntityType::IssueComment);
  CHECK(out.entity_types.at("ms/vscode!20/r900") == EntityType::PullRequestReview);
}

TEST_CASE("default subset filters relations") {
  auto table = build_rule_table(kRulesPath);
  auto parsed = parse_events_file(kFixturePath);
  auto subset = table.default_subset();
  auto out = ingest_events(parsed.events, table, &subset);
  for (const auto& q : out.tuples) CHECK(subset.count(q.relation) == 1);
  // watch, member-added, and PR-assigned tuples drop out
  CHECK(out.tuples.size() == 12);
  CHECK(out.report.unmatched_events == 3);
}

#ifdef TKGE_HAVE_ZLIB
TEST_CASE("gzip input is transparently inflated") {
  auto path = std::filesystem::temp_directory_path() / "tkge_test" / "events.jsonl.gz";
  std::filesystem::create_directories(path.parent_path());
  {
    gzFile gz = gzopen(path.string().c_str(), "wb");
    REQUIRE(gz != nullptr);
    const char* line =
        "{\"type\":\"PushEvent\",\"actor\":{\"login\":\"d\"},\"repo\":{\"name\":\"a/b\"},"
        "\"created_at\":\"2019-01-04T09:45:00Z\"}\n";
    gzwrite(gz, line, static_cast<unsigned>(std::strlen(line)));
    gzclose(gz);
  }
  auto result = parse_events_file(path);
  CHECK(result.events.size() == 1);
  CHECK(result.events[0].type == "PushEvent");
}
#endif
