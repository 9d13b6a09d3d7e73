// Exercises the shared-library surface exactly as an external client would:
// only epiconf.h, no internal headers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "approx.h"
#include "doctest.h"
#include "epiconf.h"

namespace {

struct SessionDeleter {
    void operator()(epc_session* s) const { epc_session_free(s); }
};
using Session = std::unique_ptr<epc_session, SessionDeleter>;

Session make_session() { return Session(epc_session_new()); }

std::vector<std::string> output_map(const epc_session* s) {
    std::vector<std::string> flat;
    for (size_t i = 0; i < epc_output_count(s); ++i) {
        flat.push_back(epc_output_name(s, i));
        flat.push_back(epc_output_content(s, i));
    }
    return flat;
}

}  // namespace

TEST_CASE("version and experiment registry") {
    REQUIRE(epc_version() != nullptr);
    CHECK(std::strlen(epc_version()) >= 5);

    REQUIRE(epc_experiment_count() > 0);
    bool has_example1 = false, has_accept3 = false;
    for (size_t i = 0; i < epc_experiment_count(); ++i) {
        const char* name = epc_experiment_name(i);
        REQUIRE(name != nullptr);
        if (std::strcmp(name, "example1") == 0) has_example1 = true;
        if (std::strcmp(name, "accept3") == 0) has_accept3 = true;
    }
    CHECK(has_example1);
    CHECK(has_accept3);
    CHECK(epc_experiment_name(epc_experiment_count()) == nullptr);
}

TEST_CASE("running an experiment yields a summary and schema-tagged CSVs") {
    auto s = make_session();
    REQUIRE(s);
    CHECK(epc_session_set(s.get(), "method", "exact") == 0);
    const int rc = epc_run(s.get(), "example1");
    CHECK(rc == 0);
    CHECK(std::string(epc_error_message(s.get())).empty());
    CHECK(!std::string(epc_summary(s.get())).empty());

    REQUIRE(epc_output_count(s.get()) > 0);
    for (size_t i = 0; i < epc_output_count(s.get()); ++i) {
        const std::string name = epc_output_name(s.get(), i);
        const std::string body = epc_output_content(s.get(), i);
        CHECK(name.size() > 4);
        CHECK(name.substr(name.size() - 4) == ".csv");
        CHECK(body.rfind("# schema=1", 0) == 0);
    }
}

TEST_CASE("configuration errors report rc 1 with a message") {
    auto s = make_session();
    REQUIRE(s);

    CHECK(epc_run(s.get(), "no_such_experiment") == 1);
    CHECK(!std::string(epc_error_message(s.get())).empty());

    epc_session_clear(s.get());
    epc_session_set(s.get(), "model", "no_such_model");
    epc_session_set(s.get(), "t", "0");
    CHECK(epc_run(s.get(), "confdist") == 1);
    CHECK(!std::string(epc_error_message(s.get())).empty());
}

TEST_CASE("config text loading") {
    auto s = make_session();
    REQUIRE(s);
    CHECK(epc_session_load(s.get(),
                           "# normal marginal at the origin\n"
                           "model = normal_location\n"
                           "t = 0\n") == 0);
    CHECK(epc_run(s.get(), "confdist") == 0);

    auto bad = make_session();
    REQUIRE(bad);
    CHECK(epc_session_load(bad.get(), "model = normal_location\nbroken\n") == 1);
    const std::string err = epc_error_message(bad.get());
    CHECK(err.find("2") != std::string::npos);  // the offending line number
}

TEST_CASE("special-function evaluator") {
    double out = 0.0;
    const double zero = 0.0;
    CHECK(epc_special("normal_cdf", &zero, 1, &out) == 0);
    CHECK(out == testutil::Approx(0.5).margin(1e-12));

    out = 0.0;
    CHECK(epc_special("no_such_function", &zero, 1, &out) == 1);
    CHECK(std::isnan(out));

    out = 0.0;
    CHECK(epc_special("normal_cdf", nullptr, 2, &out) == 1);
    CHECK(std::isnan(out));
}

TEST_CASE("identical config and seed give byte-identical artifacts") {
    auto run_once = [](const char* workers) {
        auto s = make_session();
        REQUIRE(s);
        epc_session_set(s.get(), "model", "normal_location");
        epc_session_set(s.get(), "theta", "0,1");
        epc_session_set(s.get(), "gamma", "0.95");
        epc_session_set(s.get(), "method", "mc");
        epc_session_set(s.get(), "nsim", "4000");
        epc_session_set(s.get(), "seed", "99");
        epc_session_set(s.get(), "workers", workers);
        REQUIRE(epc_run(s.get(), "coverage") == 0);
        return output_map(s.get());
    };
    const auto once = run_once("1");
    CHECK(once == run_once("1"));  // same config, fresh session
    CHECK(once == run_once("3"));  // worker count must not alter a byte
}

TEST_CASE("null and out-of-range handling") {
    CHECK(std::string(epc_summary(nullptr)).empty());
    CHECK(std::string(epc_error_message(nullptr)).empty());
    CHECK(epc_output_count(nullptr) == 0);
    CHECK(epc_output_name(nullptr, 0) == nullptr);

    auto s = make_session();
    REQUIRE(s);
    CHECK(epc_output_name(s.get(), 999) == nullptr);
    CHECK(epc_output_content(s.get(), 999) == nullptr);
    CHECK(epc_session_set(s.get(), nullptr, "x") == 1);
    epc_session_free(nullptr);  // must be a no-op
}
