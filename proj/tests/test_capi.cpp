#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "rellich/rellich_c.h"

TEST_CASE("expressions through the C interface") {
  rellich_expr* e = nullptr;
  REQUIRE(rellich_expr_parse("n/(2*t) + kappa", &e) == RELLICH_OK);
  const rellich_param ps[] = {{"n", 6.0}, {"kappa", 0.5}};
  double v = 0.0;
  REQUIRE(rellich_expr_eval(e, 2.0, ps, 2, &v) == RELLICH_OK);
  CHECK(v == doctest::Approx(2.0));

  CHECK(rellich_expr_eval(e, 2.0, ps, 1, &v) == RELLICH_E_UNBOUND);
  CHECK(std::string(rellich_last_error()).find("kappa") != std::string::npos);
  const rellich_param bad[] = {{"mu", 1.0}};
  CHECK(rellich_expr_eval(e, 2.0, bad, 1, &v) == RELLICH_E_INVALID);

  rellich_expr* d = nullptr;
  REQUIRE(rellich_expr_derivative(e, "t", &d) == RELLICH_OK);
  REQUIRE(rellich_expr_eval(d, 2.0, ps, 2, &v) == RELLICH_OK);
  CHECK(v == doctest::Approx(-6.0 / 8.0));

  size_t needed = 0;
  CHECK(rellich_expr_print(e, nullptr, 0, &needed) == RELLICH_E_BUFFER);
  std::vector<char> buf(needed);
  CHECK(rellich_expr_print(e, buf.data(), buf.size(), nullptr) == RELLICH_OK);
  CHECK(std::string(buf.data()).find("kappa") != std::string::npos);

  rellich_expr* bad_e = nullptr;
  CHECK(rellich_expr_parse("1 +", &bad_e) == RELLICH_E_PARSE);
  CHECK(bad_e == nullptr);
  CHECK(rellich_expr_parse(nullptr, &bad_e) == RELLICH_E_NULL);
  rellich_expr_free(d);
  rellich_expr_free(e);
  rellich_expr_free(nullptr);
}

TEST_CASE("pairs through the C interface") {
  rellich_pair* p = nullptr;
  rellich_space_form sf{};
  const rellich_param ps[] = {{"n", 6.0}};
  REQUIRE(rellich_pair_catalog("classical-rellich", "dual", ps, 1, &p, &sf) == RELLICH_OK);
  CHECK(sf.n == 6);
  CHECK(std::isinf(sf.R));
  double r = 1.0, e1 = 0.0;
  REQUIRE(rellich_pair_residual(p, &sf, 0.3, &r) == RELLICH_OK);
  CHECK(std::abs(r) < 1e-12);
  REQUIRE(rellich_pair_e1(p, &sf, 0.5, &e1) == RELLICH_OK);
  CHECK(e1 == doctest::Approx(6.0 * 2.0 / (2.0 * 0.25)));
  rellich_pair_free(p);

  CHECK(rellich_pair_catalog("nope", nullptr, nullptr, 0, &p, nullptr) == RELLICH_E_INVALID);

  REQUIRE(rellich_pair_primal("(n-2)/(2*t)", nullptr, "(n-2)^2/(4*t^2)", nullptr, 0, &p) == RELLICH_OK);
  const rellich_space_form five{5, 0.0, INFINITY};
  REQUIRE(rellich_pair_residual(p, &five, 0.7, &r) == RELLICH_OK);
  CHECK(std::abs(r) < 1e-12);
  CHECK(rellich_pair_e1(p, &five, 0.7, &r) == RELLICH_E_INVALID);
  rellich_pair_free(p);

  REQUIRE(rellich_pair_dual("n/(2*t)", "1", "n^2/(4*t^2)", nullptr, 0, &p) == RELLICH_OK);
  REQUIRE(rellich_pair_e2(p, &five, 1.0, &r) == RELLICH_OK);
  CHECK(r == doctest::Approx(5.0 * (5.0 - 8.0) / 4.0));
  const rellich_space_form bad{1, 0.0, INFINITY};
  CHECK(rellich_pair_residual(p, &bad, 1.0, &r) == RELLICH_E_INVALID);
  rellich_pair_free(p);
}

TEST_CASE("commands through the C interface") {
  const char* argv[] = {"verify", "--catalog", "classical-rellich", "--n", "6", "--tests", "4", "--timestamp", "x"};
  rellich_report* rep = nullptr;
  REQUIRE(rellich_run(9, argv, &rep) == RELLICH_OK);
  CHECK(rellich_report_verdict(rep) == RELLICH_PASS);
  CHECK(rellich_report_exit_code(rep) == 0);
  CHECK(rellich_report_test_count(rep) == 4);
  CHECK(rellich_report_scan_count(rep) == 3);
  size_t needed = 0;
  CHECK(rellich_report_json(rep, nullptr, 0, &needed) == RELLICH_E_BUFFER);
  std::string json(needed, '\0');
  REQUIRE(rellich_report_json(rep, json.data(), json.size(), nullptr) == RELLICH_OK);
  CHECK(json.find("\"verdict\": \"pass\"") != std::string::npos);
  REQUIRE(rellich_report_csv(rep, nullptr, 0, &needed) == RELLICH_E_BUFFER);
  rellich_report_free(rep);

  const char* bad[] = {"verify"};
  CHECK(rellich_run(1, bad, &rep) == RELLICH_E_INVALID);
  CHECK(std::string(rellich_status_name(RELLICH_E_IO)) == "io-error");

  const char* main_argv[] = {"rellich", "catalog", "list", "-o", "/nonexistent-dir/x.json"};
  CHECK(rellich_main(5, main_argv) == 74);
  CHECK(std::string(rellich_version()).size() > 0);
}
