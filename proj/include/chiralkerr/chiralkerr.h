/* C interface to the chiral cross-Kerr vapor simulator.
 *
 * Handles are opaque and owned by the caller; free them with the matching
 * *_free function. Every call returns a ck_status; on failure the message is
 * available from ck_last_error() on the same thread. */
#ifndef CHIRALKERR_H
#define CHIRALKERR_H

#include <stddef.h>

#if defined(_WIN32)
#define CK_API __declspec(dllexport)
#else
#define CK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum {
    CK_OK = 0,
    CK_ERR_ARGUMENT = 1,  /* null handle, bad enum, index out of range */
    CK_ERR_CONFIG = 2,    /* parse or validation failure */
    CK_ERR_NUMERICAL = 3, /* solver failure, degenerate steady state, gain */
    CK_ERR_IO = 4,
    CK_ERR_INTERNAL = 5
} ck_status;

typedef enum {
    CK_SWEEP_SPECTRUM = 0,
    CK_SWEEP_ISOLATION = 1,
    CK_SWEEP_SWITCH_DETUNING = 2,
    CK_SWEEP_PHASE = 3
} ck_sweep_kind;

typedef enum { CK_FORMAT_CSV = 0, CK_FORMAT_SVG = 1 } ck_format;

typedef struct ck_config ck_config;
typedef struct ck_result ck_result;
typedef struct ck_calibration ck_calibration;

typedef struct {
    double axis;
    double t_co;
    double t_cou;
    double isolation_db;
    double phase_co;
    double phase_counter;
    double delta_phi;
    double p2_intensity;
    double p4_intensity;
} ck_sweep_row;

typedef struct {
    double probe_detuning;     /* rad/s */
    double phi_l2;             /* rad */
    double min_route_contrast;
    double reciprocal_ceiling; /* best value with a reciprocal arm */
    int beats_reciprocity;
} ck_operating_point;

CK_API const char* ck_version(void);
CK_API const char* ck_last_error(void);

CK_API ck_status ck_config_load(const char* path, ck_config** out);
CK_API ck_status ck_config_parse(const char* json_text, ck_config** out);
/* Resolved parameters with their sources; owned by the handle. */
CK_API ck_status ck_config_describe(const ck_config* config, const char** text);
CK_API void ck_config_free(ck_config* config);

CK_API ck_status ck_run(const ck_config* config, ck_sweep_kind kind, int threads, ck_result** out);
CK_API ck_status ck_result_size(const ck_result* result, size_t* rows);
CK_API ck_status ck_result_row(const ck_result* result, size_t index, ck_sweep_row* row);
CK_API ck_status ck_result_write(const ck_result* result, ck_format format, const char* path);
CK_API void ck_result_free(ck_result* result);

CK_API ck_status ck_calibrate(const ck_config* config, int threads, ck_calibration** out);
CK_API ck_status ck_calibration_point(const ck_calibration* cal, ck_operating_point* point);
/* Intensity fraction from input port to output port, ports numbered 1..4. */
CK_API ck_status ck_calibration_fraction(const ck_calibration* cal, int input_port, int output_port,
                                         double* fraction);
CK_API ck_status ck_calibration_write(const ck_calibration* cal, const char* path);
CK_API void ck_calibration_free(ck_calibration* cal);

#ifdef __cplusplus
}
#endif

#endif
