#include "epiconf.h"

#include <cmath>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "experiments.h"
#include "numerics.h"

struct epc_session {
    epiconf::experiments::Config config;
    epiconf::experiments::RunResult last;
};

namespace {

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = epiconf::experiments::names();
    return names;
}

}  // namespace

extern "C" {

const char* epc_version(void) { return "1.0.0"; }

epc_session* epc_session_new(void) { return new (std::nothrow) epc_session; }

void epc_session_free(epc_session* s) { delete s; }

int epc_session_set(epc_session* s, const char* key, const char* value) {
    if (!s || !key || !value) return 1;
    s->config[key] = value;
    return 0;
}

int epc_session_load(epc_session* s, const char* text) {
    if (!s || !text) return 1;
    try {
        auto cfg = epiconf::experiments::parse_config_text(text);
        for (auto& [key, value] : cfg) s->config[key] = std::move(value);
        return 0;
    } catch (const std::exception& e) {
        s->last.error = e.what();
        return 1;
    }
}

void epc_session_clear(epc_session* s) {
    if (s) s->config.clear();
}

size_t epc_experiment_count(void) { return experiment_names().size(); }

const char* epc_experiment_name(size_t index) {
    const auto& names = experiment_names();
    return index < names.size() ? names[index].c_str() : nullptr;
}

int epc_run(epc_session* s, const char* experiment) {
    if (!s || !experiment) return 1;
    s->last = epiconf::experiments::run(experiment, s->config);
    return s->last.exit_code;
}

const char* epc_summary(const epc_session* s) {
    return s ? s->last.summary.c_str() : "";
}

const char* epc_error_message(const epc_session* s) {
    return s ? s->last.error.c_str() : "";
}

size_t epc_output_count(const epc_session* s) {
    return s ? s->last.outputs.size() : 0;
}

const char* epc_output_name(const epc_session* s, size_t index) {
    if (!s || index >= s->last.outputs.size()) return nullptr;
    return s->last.outputs[index].first.c_str();
}

const char* epc_output_content(const epc_session* s, size_t index) {
    if (!s || index >= s->last.outputs.size()) return nullptr;
    return s->last.outputs[index].second.c_str();
}

int epc_special(const char* name, const double* args, size_t nargs,
                double* out) {
    if (!out) return 1;
    *out = std::nan("");
    if (!name || (nargs > 0 && !args)) return 1;
    try {
        *out = epiconf::numerics::special(
            name, std::span<const double>(args, nargs));
        return 0;
    } catch (const std::exception&) {
        return 1;
    }
}

}  // extern "C"
