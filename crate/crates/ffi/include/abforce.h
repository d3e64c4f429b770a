#ifndef ABFORCE_H
#define ABFORCE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Bit flags of [`AbfRecordCheck::flagged`].
 */
#define ABF_FLAG_LAMBDA 1

#define ABF_FLAG_PHASE 2

#define ABF_FLAG_SHIFT 4

typedef enum AbfStatus {
  ABF_STATUS_OK = 0,
  ABF_STATUS_NULL_POINTER = 1,
  ABF_STATUS_DOMAIN = 2,
  ABF_STATUS_SINGULARITY = 3,
  ABF_STATUS_CONVERGENCE = 4,
  ABF_STATUS_OUT_OF_RANGE = 5,
  ABF_STATUS_INVALID_UTF8 = 6,
  ABF_STATUS_PANIC = 7,
} AbfStatus;

typedef enum AbfTristate {
  ABF_TRISTATE_FALSE = 0,
  ABF_TRISTATE_TRUE = 1,
  ABF_TRISTATE_UNKNOWN = 2,
} AbfTristate;

typedef enum AbfOutcome {
  ABF_OUTCOME_NOT_TESTABLE = 0,
  ABF_OUTCOME_FORCES_BELOW_COHERENCE = 1,
  ABF_OUTCOME_CLASSICAL_ONLY = 2,
  ABF_OUTCOME_CLASSICAL_AND_DISPERSIONLESS = 3,
  ABF_OUTCOME_CLASSICAL_ONLY_SEMI_UNKNOWN = 4,
} AbfOutcome;

/**
 * Opaque electron beam.
 */
typedef struct AbfBeam AbfBeam;

/**
 * Opaque list of experiment records.
 */
typedef struct AbfCatalog AbfCatalog;

/**
 * Opaque integration result with its samples.
 */
typedef struct AbfTrajectory AbfTrajectory;

typedef struct AbfBeamProperties {
  double kinetic_energy_j;
  double speed_m_per_s;
  double debroglie_wavelength_m;
  double wavevector_per_m;
  /**
   * NaN when the beam has no energy spread.
   */
  double energy_spread_j;
} AbfBeamProperties;

/**
 * Closed-form quantities for one passage. Lengths in m, phases in rad, times in s.
 */
typedef struct AbfAnalytic {
  double epsilon;
  double side_first_order_m;
  double side_second_order_m;
  double relative_first_order_m;
  double relative_second_order_m;
  double relative_total_m;
  double ab_phase_rad;
  double phase_dispersionless_rad;
  double phase_dispersive_rad;
  double phase_total_rad;
  double envelope_shift_m;
  double classical_delay_s;
  double semiclassical_delay_s;
} AbfAnalytic;

typedef struct AbfIntegratorConfig {
  double window_factor;
  double relative_tolerance;
  double absolute_tolerance_position_m;
  uint64_t max_steps;
  bool tail_correction;
} AbfIntegratorConfig;

typedef struct AbfTrajectorySummary {
  double displacement_m;
  double time_delay_s;
  double initial_speed_m_per_s;
  double final_speed_m_per_s;
  double tail_correction_applied_m;
  double local_error_estimate_m;
  double epsilon;
  uint64_t accepted_steps;
  uint64_t rejected_steps;
  uint64_t sample_count;
} AbfTrajectorySummary;

/**
 * Stored and recomputed columns in the record's units (pm, π rad, nm).
 * Deviations are NaN when undefined.
 */
typedef struct AbfRecordCheck {
  double lambda_stored_pm;
  double lambda_computed_pm;
  double lambda_deviation;
  double phase_stored_pi;
  double phase_computed_pi;
  double phase_deviation;
  double shift_stored_nm;
  double shift_computed_nm;
  double shift_deviation;
  uint32_t flagged;
} AbfRecordCheck;

typedef struct AbfRegime {
  double ab_phase_rad;
  double fringe_threshold_rad;
  double v_dt_classical_m;
  /**
   * NaN without an impact parameter.
   */
  double v_dt_semiclassical_m;
  double coherence_length_m;
  bool fringe_test_feasible;
  bool classical_force_testable;
  enum AbfTristate dispersionless_force_testable;
  enum AbfOutcome outcome;
} AbfRegime;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, static NUL-terminated string.
 */
const char *abf_version(void);

/**
 * Message of the last failure on this thread; empty if none. Valid until
 * the next failing call on the same thread.
 */
const char *abf_last_error_message(void);

/**
 * Creates a beam of `energy_kev`; `energy_spread_ev` may be NaN for none.
 *
 * # Safety
 * `out` must be valid for writing a pointer.
 */
enum AbfStatus abf_beam_new(double energy_kev, double energy_spread_ev, struct AbfBeam **out);

/**
 * # Safety
 * `beam` must come from [`abf_beam_new`] and not be used afterwards.
 */
void abf_beam_free(struct AbfBeam *beam);

/**
 * # Safety
 * `beam` must be a live handle; `out` valid for writing.
 */
enum AbfStatus abf_beam_properties(const struct AbfBeam *beam, struct AbfBeamProperties *out);

double abf_flux_from_gauss_cm2(double gauss_cm2);

double abf_flux_to_gauss_cm2(double webers);

/**
 * Field (T) and flux (Wb) of a solenoid. Either out-pointer may be NULL.
 *
 * # Safety
 * Non-NULL out-pointers must be valid for writing.
 */
enum AbfStatus abf_solenoid(double radius_m,
                            double winding_density_per_m,
                            double current_a,
                            double relative_permeability,
                            double *field_t,
                            double *flux_wb);

/**
 * x-component of the force (N) on an electron at (x, y) moving at `speed`.
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum AbfStatus abf_force_x(double flux_wb,
                           double speed_m_per_s,
                           double x_m,
                           double y_m,
                           double *out);

/**
 * # Safety
 * `beam` must be a live handle; `out` valid for writing.
 */
enum AbfStatus abf_analytic(double flux_wb,
                            const struct AbfBeam *beam,
                            double impact_parameter_m,
                            struct AbfAnalytic *out);

struct AbfIntegratorConfig abf_integrator_config_default(void);

/**
 * Integrates one passage. On `Convergence`, `*out` still receives the
 * partial trajectory, which the caller must free.
 *
 * # Safety
 * `beam` must be a live handle, `config` NULL or valid, `out` valid for writing.
 */
enum AbfStatus abf_integrate_passage(double flux_wb,
                                     const struct AbfBeam *beam,
                                     double impact_parameter_m,
                                     const struct AbfIntegratorConfig *config,
                                     struct AbfTrajectory **out);

/**
 * # Safety
 * `traj` must come from [`abf_integrate_passage`] and not be used afterwards.
 */
void abf_trajectory_free(struct AbfTrajectory *traj);

/**
 * # Safety
 * `traj` must be a live handle; `out` valid for writing.
 */
enum AbfStatus abf_trajectory_summary(const struct AbfTrajectory *traj,
                                      struct AbfTrajectorySummary *out);

/**
 * Copies up to `capacity` samples into the three arrays (any may be NULL)
 * and stores the number copied in `written`.
 *
 * # Safety
 * `traj` must be a live handle; non-NULL arrays must hold `capacity` doubles.
 */
enum AbfStatus abf_trajectory_samples(const struct AbfTrajectory *traj,
                                      double *t_s,
                                      double *x_m,
                                      double *v_m_per_s,
                                      uintptr_t capacity,
                                      uintptr_t *written);

/**
 * Displacement between passages at +|y| and −|y| (m).
 *
 * # Safety
 * `beam` must be a live handle, `config` NULL or valid, `out` valid for writing.
 */
enum AbfStatus abf_numeric_relative_displacement(double flux_wb,
                                                 const struct AbfBeam *beam,
                                                 double impact_parameter_m,
                                                 const struct AbfIntegratorConfig *config,
                                                 double *out);

/**
 * Part of one passage's displacement quadratic in the flux (m).
 *
 * # Safety
 * `beam` must be a live handle, `config` NULL or valid, `out` valid for writing.
 */
enum AbfStatus abf_extract_second_order(double flux_wb,
                                        const struct AbfBeam *beam,
                                        double impact_parameter_m,
                                        const struct AbfIntegratorConfig *config,
                                        double *out);

/**
 * The six builtin experiments.
 *
 * # Safety
 * `out` must be valid for writing a pointer.
 */
enum AbfStatus abf_catalog_builtin(struct AbfCatalog **out);

/**
 * Parses a catalog JSON document (NUL-terminated UTF-8).
 *
 * # Safety
 * `json` must be NULL or a NUL-terminated string; `out` valid for writing.
 */
enum AbfStatus abf_catalog_from_json(const char *json, struct AbfCatalog **out);

/**
 * # Safety
 * `cat` must come from a catalog constructor and not be used afterwards.
 */
void abf_catalog_free(struct AbfCatalog *cat);

/**
 * Number of records; 0 for NULL.
 *
 * # Safety
 * `cat` must be NULL or a live handle.
 */
uintptr_t abf_catalog_len(const struct AbfCatalog *cat);

/**
 * Record name owned by the catalog; NULL when out of range.
 *
 * # Safety
 * `cat` must be NULL or a live handle.
 */
const char *abf_catalog_name(const struct AbfCatalog *cat, uintptr_t index);

/**
 * # Safety
 * `cat` must be a live handle; `out` valid for writing.
 */
enum AbfStatus abf_catalog_verify(const struct AbfCatalog *cat,
                                  uintptr_t index,
                                  struct AbfRecordCheck *out);

/**
 * Classifies record `index`. `impact_parameter_m` overrides the record's
 * y_e unless NaN.
 *
 * # Safety
 * `cat` must be a live handle; `out` valid for writing.
 */
enum AbfStatus abf_catalog_classify(const struct AbfCatalog *cat,
                                    uintptr_t index,
                                    double impact_parameter_m,
                                    struct AbfRegime *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ABFORCE_H */
