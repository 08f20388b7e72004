#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "paradin/paradin.h"

namespace {

struct Handle {
  paradin_config* cfg = paradin_config_create();
  ~Handle() { paradin_config_destroy(cfg); }
};

void collect_line(const char* line, void* user) {
  static_cast<std::vector<std::string>*>(user)->push_back(line);
}

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("version is the semantic triple") {
    CHECK(std::string(paradin_version()) == "0.1.0");
  }

  TEST_CASE("config lifecycle and error reporting") {
    Handle h;
    REQUIRE(h.cfg != nullptr);
    CHECK(paradin_config_set(h.cfg, "nt", "16") == PARADIN_OK);
    CHECK(std::string(paradin_last_error()).empty());

    CHECK(paradin_config_set(h.cfg, "no_such_key", "1") == PARADIN_ERR_INVALID_ARGUMENT);
    CHECK(std::string(paradin_last_error()).find("no_such_key") != std::string::npos);

    // the next successful call clears the sticky message
    CHECK(paradin_config_set(h.cfg, "nx", "4") == PARADIN_OK);
    CHECK(std::string(paradin_last_error()).empty());

    CHECK(paradin_config_set(nullptr, "nt", "8") == PARADIN_ERR_INVALID_ARGUMENT);
    CHECK(paradin_config_set(h.cfg, "mode", "turbo") == PARADIN_ERR_INVALID_ARGUMENT);

    // destroying a null config is a no-op, not a crash
    paradin_config_destroy(nullptr);
  }

  TEST_CASE("loading a missing config file fails with a message") {
    paradin_config* cfg = paradin_config_load("does_not_exist.cfg");
    CHECK(cfg == nullptr);
    CHECK(!std::string(paradin_last_error()).empty());
  }

  TEST_CASE("solve_grid fills the report for the default heat benchmark") {
    Handle h;
    REQUIRE(h.cfg != nullptr);
    CHECK(paradin_config_set(h.cfg, "timing", "off") == PARADIN_OK);
    paradin_run_report rep{};
    REQUIRE(paradin_solve_grid(h.cfg, 0, &rep) == PARADIN_OK);
    CHECK(rep.nt == 30);
    CHECK(rep.nx == 4);
    CHECK(rep.ny == 4);
    CHECK(rep.newton_iters == 60);
    CHECK(rep.l2 == doctest::Approx(2.4499232485639112e-05).epsilon(1e-12));
    CHECK(rep.wall_s == 0.0);

    CHECK(paradin_solve_grid(h.cfg, 5, &rep) == PARADIN_ERR_INVALID_ARGUMENT);
    CHECK(paradin_solve_grid(h.cfg, 0, nullptr) == PARADIN_ERR_INVALID_ARGUMENT);
  }

  TEST_CASE("solver failures map to typed statuses") {
    Handle h;
    REQUIRE(h.cfg != nullptr);
    CHECK(paradin_config_set(h.cfg, "nt", "16") == PARADIN_OK);
    CHECK(paradin_config_set(h.cfg, "method", "paradin") == PARADIN_OK);
    CHECK(paradin_config_set(h.cfg, "max_newton", "1") == PARADIN_OK);
    paradin_run_report rep{};
    CHECK(paradin_solve_grid(h.cfg, 0, &rep) == PARADIN_ERR_ITERATION_CAP);
    CHECK(std::string(paradin_last_error()).find("Newton") != std::string::npos);
  }

  TEST_CASE("run_experiment returns the CSV and the summary") {
    Handle h;
    REQUIRE(h.cfg != nullptr);
    CHECK(paradin_config_set(h.cfg, "timing", "off") == PARADIN_OK);
    char* csv = nullptr;
    char* summary = nullptr;
    int32_t failed = -1;
    REQUIRE(paradin_run_experiment(h.cfg, &csv, &summary, &failed) == PARADIN_OK);
    REQUIRE(csv != nullptr);
    CHECK(std::string(csv).find("problem,nt,nx,ny,method,") == 0);
    CHECK(std::string(csv).find("heat,30,4,4,sequential,") != std::string::npos);
    CHECK(failed == 0);
    REQUIRE(summary != nullptr);
    CHECK(std::string(summary).find("L2=") != std::string::npos);
    paradin_string_free(csv);
    paradin_string_free(summary);

    CHECK(paradin_run_experiment(nullptr, &csv, &summary, &failed) ==
          PARADIN_ERR_INVALID_ARGUMENT);
  }

  TEST_CASE("verify streams one line per check") {
    std::vector<std::string> lines;
    int32_t failures = -1;
    REQUIRE(paradin_verify(nullptr, "proposition1", collect_line, &lines, &failures) ==
            PARADIN_OK);
    CHECK(failures == 0);
    CHECK(lines.size() >= 6);
    for (const std::string& l : lines) CHECK(l.find("PASS") != std::string::npos);

    CHECK(paradin_verify(nullptr, "no_such_suite", collect_line, &lines, &failures) ==
          PARADIN_ERR_INVALID_ARGUMENT);
  }

  TEST_CASE("speedup predictions evaluate the closed forms") {
    double s = 0.0;
    REQUIRE(paradin_predict_speedup("combined", 480, 4, 3, 2, 2, 2, &s) == PARADIN_OK);
    CHECK(std::fabs(s - 38.4) <= 1e-12);
    REQUIRE(paradin_predict_speedup("combined_coarsened", 480, 4, 3, 2, 2, 2, &s) == PARADIN_OK);
    CHECK(s == doctest::Approx(46.829268292682926).epsilon(1e-14));
    REQUIRE(paradin_predict_speedup("paradin", 480, 4, 3, 2, 2, 2, &s) == PARADIN_OK);
    CHECK(s == doctest::Approx(56.470588235294116).epsilon(1e-14));

    CHECK(paradin_predict_speedup("warp", 480, 4, 3, 2, 2, 2, &s) ==
          PARADIN_ERR_INVALID_ARGUMENT);
    CHECK(paradin_predict_speedup("combined", 480, 4, 3, 2, 2, 2, nullptr) ==
          PARADIN_ERR_INVALID_ARGUMENT);
  }
}
