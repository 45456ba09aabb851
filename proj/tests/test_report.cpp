#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "exactrank/errors.hpp"
#include "exactrank/report.hpp"
#include "exactrank/table_cache.hpp"

using namespace exactrank;

namespace {

CsvTable csv(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in);
}

const char* const kSmall = "group,value\nB,12\nA,10\nB,20\nA,12\nB,15\n";

}  // namespace

TEST_CASE("read_csv handles quoting, CRLF and a BOM") {
  const CsvTable t = csv("\xEF\xBB\xBFgroup,\"note\"\r\n\"x,y\",\"say \"\"hi\"\"\"\r\n\r\nz,w\r\n");
  CHECK(t.header == std::vector<std::string>{"group", "note"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == "x,y");
  CHECK(t.rows[0][1] == "say \"hi\"");
  CHECK(t.column("note") == 1);
  CHECK_THROWS_AS(t.column("missing"), InputError);
  CHECK_THROWS_AS(csv("a,b\n1\n"), InputError);
  CHECK_THROWS_AS(csv(""), InputError);
}

TEST_CASE("split_groups") {
  const TwoSample s = split_groups(csv(kSmall), "group", "value");
  CHECK(s.label1 == "A");
  CHECK(s.values1 == std::vector<double>{10, 12});
  CHECK(s.values2 == std::vector<double>{12, 20, 15});

  const TwoSample flipped = split_groups(csv(kSmall), "group", "value", std::string("B"));
  CHECK(flipped.label1 == "B");
  CHECK(flipped.label2 == "A");

  CHECK_THROWS_AS(split_groups(csv("group,value\nA,1\nA,2\n"), "group", "value"), InputError);
  CHECK_THROWS_AS(split_groups(csv("group,value\nA,1\nB,2\nC,3\n"), "group", "value"), InputError);
  CHECK_THROWS_AS(split_groups(csv("group,value\nA,1\nB,abc\n"), "group", "value"), InputError);
  CHECK_THROWS_AS(split_groups(csv("group,value\nA,1\nB,nan\n"), "group", "value"), InputError);
  CHECK_THROWS_AS(split_groups(csv(kSmall), "group", "value", std::string("C")), InputError);
}

TEST_CASE("run_test on a tied sample") {
  const TestReport r = run_test(split_groups(csv(kSmall), "group", "value"), {});
  CHECK(r.n1 == 2);
  CHECK(r.n2 == 3);
  CHECK(r.ranks == std::vector<std::string>{"1", "2.5", "2.5", "4", "5"});
  CHECK(r.ranks_group1 == std::vector<std::string>{"1", "2.5"});
  CHECK(r.w_obs == "3.5");
  CHECK(r.u_obs == "8.5");
  CHECK(r.ties_present);
  CHECK(r.tie_pattern == "1011");
  CHECK(*r.p_less.exact == Rational(1, 5));
  CHECK(*r.p_greater.exact == 1);
  CHECK(*r.p_two_sided.exact == Rational(2, 5));
  CHECK(r.p_selected().value == 0.4);
  CHECK(r.mean == 6);
  CHECK(r.variance == Rational(57, 20));
  CHECK(r.continuity_correction == Rational(1, 4));
  REQUIRE(r.normal_p_less.has_value());
  CHECK(*r.normal_p_less == doctest::Approx(0.09130118890568195).epsilon(1e-12));

  TestOptions minlike;
  minlike.two_sided_mode = TwoSidedMode::minlike;
  // counts by W: 3.5:2 5:2 6:1 6.5:2 7.5:2 9:1; those at most 2 cover everything
  CHECK(*run_test(split_groups(csv(kSmall), "group", "value"), minlike).p_two_sided.exact == 1);
}

TEST_CASE("run_test is invariant to row order and accepts a tie epsilon") {
  const TestReport a = run_test(split_groups(csv(kSmall), "group", "value"), {});
  const TestReport b =
      run_test(split_groups(csv("group,value\nA,12\nB,20\nB,15\nA,10\nB,12\n"), "group", "value"), {});
  CHECK(*a.p_two_sided.exact == *b.p_two_sided.exact);
  CHECK(a.w_obs == b.w_obs);

  TestOptions eps;
  eps.tie_epsilon = 1e-9;
  const TestReport c = run_test(
      split_groups(csv("group,value\nA,10\nA,12\nB,12.0000000001\nB,15\nB,20\n"), "group", "value"), eps);
  CHECK(c.tie_pattern == "1011");
  CHECK(*c.p_less.exact == Rational(1, 5));
}

TEST_CASE("run_test without ties and at the smallest sizes") {
  const TestReport r =
      run_test(split_groups(csv("g,v\nx,1\nx,2\ny,3\ny,4\ny,5\n"), "g", "v"), {});
  CHECK_FALSE(r.ties_present);
  CHECK(r.tie_pattern == "1111");
  CHECK(r.w_obs == "3");
  CHECK(*r.p_less.exact == Rational(1, 10));

  const TestReport single = run_test(split_groups(csv("g,v\nx,1\ny,2\n"), "g", "v"), {});
  CHECK(*single.p_two_sided.exact == 1);
  CHECK(*single.p_less.exact == Rational(1, 2));

  const TestReport flat = run_test(split_groups(csv("g,v\nx,1\ny,1\ny,1\n"), "g", "v"), {});
  CHECK(flat.variance == 0);
  CHECK_FALSE(flat.normal_p_less.has_value());
  CHECK(*flat.p_two_sided.exact == 1);
}

TEST_CASE("run_test guards and methods") {
  std::string text = "g,v\n";
  for (int i = 0; i < 30; ++i) text += std::string(i % 2 ? "a" : "b") + "," + std::to_string(i) + "\n";
  const TwoSample data = split_groups(csv(text), "g", "v");
  TestOptions capped;
  capped.max_total = 20;
  CHECK_THROWS_AS(run_test(data, capped), CapExceeded);
  capped.force = true;
  CHECK(run_test(data, capped).p_two_sided.exact.has_value());

  TestOptions normal;
  normal.method = Method::normal;
  normal.max_total = 20;
  const TestReport approx = run_test(data, normal);
  CHECK_FALSE(approx.p_two_sided.exact.has_value());
  CHECK(approx.p_two_sided.value == *approx.normal_p_two_sided);

  TableCache cache;
  TestOptions cached;
  cached.cache = &cache;
  const TestReport via_cache = run_test(split_groups(csv(kSmall), "group", "value"), cached);
  CHECK(*via_cache.p_less.exact == Rational(1, 5));
  CHECK(cache.misses() == 1);
}

TEST_CASE("JSON report") {
  const TestReport r = run_test(split_groups(csv(kSmall), "group", "value"), {});
  const std::string text = report_to_json(r);
  const auto j = nlohmann::json::parse(text);
  CHECK(j["method"] == "exact");
  CHECK(j["w_obs"] == "3.5");
  CHECK(j["tie_pattern"] == "1011");
  CHECK(j["p_value"]["rational"] == "2/5");
  CHECK(j["p_value"]["float"] == 0.4);
  CHECK(j["variance"]["rational"] == "57/20");
  CHECK(j["normal_approximation"]["continuity_correction"] == "1/4");
  CHECK(text.find("\"rational\"") < text.find("\"float\""));
  CHECK(recompute_report_floats(text) == text);

  auto tampered = nlohmann::ordered_json::parse(text);
  tampered["p_less"]["float"] = 0.0;
  CHECK(recompute_report_floats(tampered.dump(2)) == text);

  CHECK(report_to_text(r).find("W:             3.5\n") != std::string::npos);
}
