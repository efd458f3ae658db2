#ifndef QCONTACT_H
#define QCONTACT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum QcStatus {
  QC_STATUS_OK = 0,
  QC_STATUS_NULL_POINTER = 1,
  QC_STATUS_INVALID_INPUT = 2,
  QC_STATUS_NOT_AN_ELLIPSOID = 3,
  QC_STATUS_UNSUPPORTED_CLASS = 4,
  QC_STATUS_SMALLNESS_VIOLATED = 5,
  QC_STATUS_NO_MATCHING_ZONE = 6,
  QC_STATUS_NUMERICAL = 7,
  QC_STATUS_PANIC = 8,
} QcStatus;

typedef enum QcClass {
  QC_CLASS_ELLIPSOID = 0,
  QC_CLASS_HYPERBOLOID_ONE_SHEET = 1,
  QC_CLASS_HYPERBOLOID_TWO_SHEETS = 2,
  QC_CLASS_ELLIPTIC_PARABOLOID = 3,
  QC_CLASS_HYPERBOLIC_PARABOLOID = 4,
  QC_CLASS_ELLIPTIC_CYLINDER = 5,
  QC_CLASS_HYPERBOLIC_CYLINDER = 6,
  QC_CLASS_PARABOLIC_CYLINDER = 7,
  QC_CLASS_PARALLEL_PLANES = 8,
  QC_CLASS_SINGLE_PLANE = 9,
  QC_CLASS_CONE = 10,
  QC_CLASS_INTERSECTING_PLANES = 11,
  QC_CLASS_OTHER = 12,
} QcClass;

typedef enum QcRegion {
  QC_REGION_R_MINUS = 0,
  QC_REGION_R_PLUS = 1,
  QC_REGION_STRADDLING = 2,
  QC_REGION_INDETERMINATE = 3,
} QcRegion;

/**
 * Opaque ellipsoid.
 */
typedef struct QcEllipsoid QcEllipsoid;

/**
 * Opaque quadric.
 */
typedef struct QcQuadric QcQuadric;

/**
 * Opaque scene with its tolerances fixed at creation. Smallness verdicts
 * are cached per ellipsoid shape across queries.
 */
typedef struct QcScene QcScene;

typedef struct QcTolerances {
  double eps_rel;
  double disc_rel;
  double orthogonality;
} QcTolerances;

/**
 * Discriminants with their banded signs (-1, 0 or 1).
 */
typedef struct QcDiscriminants {
  double d3;
  double d4;
  int8_t s3;
  int8_t s4;
} QcDiscriminants;

typedef struct QcContact {
  bool transversal;
  enum QcRegion region;
  /**
   * False when a negative verdict was reached without smallness.
   */
  bool conclusive;
  /**
   * Coefficients of the characteristic polynomial, `c4` first.
   */
  double poly[5];
} QcContact;

typedef struct QcSceneResult {
  /**
   * 1-based zone id, 0 when the ellipsoid crosses a separating plane.
   */
  size_t zone;
  bool contact;
  bool conclusive;
} QcSceneResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *qc_version(void);

/**
 * Message of the last failure on this thread. Valid until the next failing
 * call on the same thread; empty if there was none.
 */
const char *qc_last_error_message(void);

struct QcTolerances qc_tolerances_default(void);

/**
 * `a` holds `a11 a22 a33 a12 a13 a23`, `b` the linear half-coefficients.
 */
enum QcStatus qc_quadric_from_coefficients(const double *a,
                                           const double *b,
                                           double c,
                                           struct QcQuadric **out_quadric);

/**
 * Parses `{"a":[6 numbers],"b":[3 numbers],"c":number}`.
 */
enum QcStatus qc_quadric_from_json(const char *json, struct QcQuadric **out_quadric);

void qc_quadric_free(struct QcQuadric *q);

enum QcStatus qc_classify(const struct QcQuadric *q,
                          const struct QcTolerances *tol,
                          enum QcClass *out_class);

enum QcStatus qc_ellipsoid_from_quadric(const struct QcQuadric *q,
                                        const struct QcTolerances *tol,
                                        struct QcEllipsoid **out_ellipsoid);

/**
 * `rotation` is row-major; its columns are the axis directions.
 */
enum QcStatus qc_ellipsoid_from_axes(const double *center,
                                     const double *semi_axes,
                                     const double *rotation,
                                     struct QcEllipsoid **out_ellipsoid);

void qc_ellipsoid_free(struct QcEllipsoid *e);

/**
 * Coefficients of `det(λE + Q)`, `c4` first, into `out_coeffs[5]`.
 */
enum QcStatus qc_char_poly(const struct QcQuadric *e,
                           const struct QcQuadric *q,
                           double *out_coeffs);

/**
 * `coeffs[5]` is `c4` first.
 */
enum QcStatus qc_discriminants(const double *coeffs,
                               const struct QcTolerances *tol,
                               struct QcDiscriminants *out_disc);

enum QcStatus qc_is_small(const struct QcEllipsoid *e,
                          const struct QcQuadric *q,
                          const struct QcTolerances *tol,
                          bool *out_small);

/**
 * Transversal-contact test. With `require_smallness` a failed smallness
 * check is reported as `SmallnessViolated`.
 */
enum QcStatus qc_contact(const struct QcEllipsoid *e,
                         const struct QcQuadric *q,
                         bool require_smallness,
                         const struct QcTolerances *tol,
                         struct QcContact *out_contact);

/**
 * Ellipsoid against the plane `n · x = d`.
 */
enum QcStatus qc_plane_contact(const struct QcEllipsoid *e,
                               const double *n,
                               double d,
                               const struct QcTolerances *tol,
                               struct QcContact *out_contact);

/**
 * Parses `{"planes":[{"n":[3],"d":x}, …],"zones":[{"signs":"+-","quadric":{…}}, …]}`.
 */
enum QcStatus qc_scene_from_json(const char *json,
                                 const struct QcTolerances *tol,
                                 struct QcScene **out_scene);

void qc_scene_free(struct QcScene *s);

/**
 * Scene query. Without `one_sided`, any piece failing smallness is an
 * error; with it, such pieces give inconclusive negative verdicts.
 */
enum QcStatus qc_scene_detect_contact(const struct QcScene *scene,
                                      const struct QcEllipsoid *e,
                                      bool one_sided,
                                      struct QcSceneResult *out_result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCONTACT_H */
