#include "chiralkerr/chiralkerr.h"

#include <exception>
#include <new>
#include <string>

#include "chiralkerr/errors.hpp"
#include "chiralkerr/experiment.hpp"

struct ck_config {
    chiralkerr::ExperimentConfig config;
    std::string description;
};

struct ck_result {
    chiralkerr::SweepResult result;
};

struct ck_calibration {
    chiralkerr::CalibrationResult result;
};

namespace {

thread_local std::string g_last_error;

ck_status fail(ck_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <class F>
ck_status guard(F f) {
    try {
        f();
        g_last_error.clear();
        return CK_OK;
    } catch (const chiralkerr::ParseError& e) {
        return fail(CK_ERR_CONFIG, e.what());
    } catch (const chiralkerr::ValidationError& e) {
        return fail(CK_ERR_CONFIG, e.what());
    } catch (const chiralkerr::DomainError& e) {
        return fail(CK_ERR_CONFIG, e.what());
    } catch (const chiralkerr::NumericalError& e) {
        return fail(CK_ERR_NUMERICAL, e.what());
    } catch (const chiralkerr::IoError& e) {
        return fail(CK_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CK_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(CK_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(CK_ERR_INTERNAL, "unknown error");
    }
}

}  // namespace

extern "C" {

const char* ck_version(void) { return "1.0.0"; }

const char* ck_last_error(void) { return g_last_error.c_str(); }

ck_status ck_config_load(const char* path, ck_config** out) {
    if (!path || !out) return fail(CK_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] { *out = new ck_config{chiralkerr::load_config(path), {}}; });
}

ck_status ck_config_parse(const char* json_text, ck_config** out) {
    if (!json_text || !out) return fail(CK_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] { *out = new ck_config{chiralkerr::parse_config(json_text), {}}; });
}

ck_status ck_config_describe(const ck_config* config, const char** text) {
    if (!config || !text) return fail(CK_ERR_ARGUMENT, "null argument");
    auto* c = const_cast<ck_config*>(config);
    return guard([&] {
        if (c->description.empty()) c->description = c->config.describe();
        *text = c->description.c_str();
    });
}

void ck_config_free(ck_config* config) { delete config; }

ck_status ck_run(const ck_config* config, ck_sweep_kind kind, int threads, ck_result** out) {
    if (!config || !out) return fail(CK_ERR_ARGUMENT, "null argument");
    if (threads < 1) return fail(CK_ERR_ARGUMENT, "threads must be >= 1");
    if (kind < CK_SWEEP_SPECTRUM || kind > CK_SWEEP_PHASE) return fail(CK_ERR_ARGUMENT, "unknown sweep kind");
    *out = nullptr;
    return guard([&] {
        const chiralkerr::RunOptions opts{threads};
        chiralkerr::SweepResult r;
        switch (kind) {
            case CK_SWEEP_SPECTRUM: r = chiralkerr::run_spectrum(config->config, opts); break;
            case CK_SWEEP_ISOLATION: r = chiralkerr::run_isolation_sweep(config->config, opts); break;
            case CK_SWEEP_SWITCH_DETUNING: r = chiralkerr::run_switch_detuning_sweep(config->config, opts); break;
            case CK_SWEEP_PHASE: r = chiralkerr::run_phase_sweep(config->config, opts); break;
            default: throw std::invalid_argument("unknown sweep kind");
        }
        *out = new ck_result{std::move(r)};
    });
}

ck_status ck_result_size(const ck_result* result, size_t* rows) {
    if (!result || !rows) return fail(CK_ERR_ARGUMENT, "null argument");
    *rows = result->result.rows.size();
    return CK_OK;
}

ck_status ck_result_row(const ck_result* result, size_t index, ck_sweep_row* row) {
    if (!result || !row) return fail(CK_ERR_ARGUMENT, "null argument");
    if (index >= result->result.rows.size()) return fail(CK_ERR_ARGUMENT, "row index out of range");
    const auto& r = result->result.rows[index];
    *row = {r.axis, r.t_co, r.t_cou, r.isolation_db, r.phase_co, r.phase_counter, r.delta_phi, r.p2_intensity,
            r.p4_intensity};
    return CK_OK;
}

ck_status ck_result_write(const ck_result* result, ck_format format, const char* path) {
    if (!result || !path) return fail(CK_ERR_ARGUMENT, "null argument");
    if (format != CK_FORMAT_CSV && format != CK_FORMAT_SVG) return fail(CK_ERR_ARGUMENT, "unknown format");
    return guard([&] {
        chiralkerr::emit(result->result,
                         format == CK_FORMAT_CSV ? chiralkerr::OutputFormat::Csv : chiralkerr::OutputFormat::Svg, path);
    });
}

void ck_result_free(ck_result* result) { delete result; }

ck_status ck_calibrate(const ck_config* config, int threads, ck_calibration** out) {
    if (!config || !out) return fail(CK_ERR_ARGUMENT, "null argument");
    if (threads < 1) return fail(CK_ERR_ARGUMENT, "threads must be >= 1");
    *out = nullptr;
    return guard([&] { *out = new ck_calibration{chiralkerr::run_calibration(config->config, {threads})}; });
}

ck_status ck_calibration_point(const ck_calibration* cal, ck_operating_point* point) {
    if (!cal || !point) return fail(CK_ERR_ARGUMENT, "null argument");
    const auto& op = cal->result.point;
    *point = {op.probe_detuning, op.phi_l2, op.min_route_contrast, op.reciprocal_ceiling, op.beats_reciprocity ? 1 : 0};
    return CK_OK;
}

ck_status ck_calibration_fraction(const ck_calibration* cal, int input_port, int output_port, double* fraction) {
    if (!cal || !fraction) return fail(CK_ERR_ARGUMENT, "null argument");
    if (input_port < 1 || input_port > 4 || output_port < 1 || output_port > 4)
        return fail(CK_ERR_ARGUMENT, "ports are numbered 1 to 4");
    *fraction = cal->result.point.table.fraction[input_port - 1][output_port - 1];
    return CK_OK;
}

ck_status ck_calibration_write(const ck_calibration* cal, const char* path) {
    if (!cal || !path) return fail(CK_ERR_ARGUMENT, "null argument");
    return guard([&] { chiralkerr::write_text(chiralkerr::calibration_csv(cal->result), path); });
}

void ck_calibration_free(ck_calibration* cal) { delete cal; }

}  // extern "C"
