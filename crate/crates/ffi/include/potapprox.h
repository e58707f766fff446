#ifndef POTAPPROX_H
#define POTAPPROX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PaStatus {
  PA_STATUS_OK = 0,
  PA_STATUS_NULL_POINTER = 1,
  PA_STATUS_INVALID_ARGUMENT = 2,
  PA_STATUS_ORACLE_UNAVAILABLE = 3,
  PA_STATUS_NUMERICAL = 4,
  PA_STATUS_IO = 5,
  PA_STATUS_PANIC = 6,
} PaStatus;

// A Leja sequence on a boundary mesh.
typedef struct PaNodes PaNodes;

// A compact set.
typedef struct PaSet PaSet;

// Extremal-function solver on a fixed boundary mesh.
typedef struct PaSolver PaSolver;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message into `buf` (NUL-terminated, truncated to
// `len`) and returns the full message length excluding the terminator.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t pa_last_error(char *buf, size_t len);

// Closed disk with the given center and radius.
//
// # Safety
// `out` must be null or valid for writes.
enum PaStatus pa_set_disk(double center_re, double center_im, double radius, struct PaSet **out);

// Segment from `a` to `b`.
//
// # Safety
// `out` must be null or valid for writes.
enum PaStatus pa_set_segment(double a_re,
                             double a_im,
                             double b_re,
                             double b_im,
                             struct PaSet **out);

// Star of `arms` unit segments from the origin.
//
// # Safety
// `out` must be null or valid for writes.
enum PaStatus pa_set_star(uint32_t arms, struct PaSet **out);

// The set called `name` in a spec file given as text.
//
// # Safety
// `spec_text` and `name` must be null or NUL-terminated; `out` null or valid for writes.
enum PaStatus pa_set_from_spec(const char *spec_text, const char *name, struct PaSet **out);

// # Safety
// `set` must be null or come from a `pa_set_*` constructor and not be freed twice.
void pa_set_free(struct PaSet *set);

// # Safety
// `set` must be a live handle; `out` valid for writes.
enum PaStatus pa_set_diameter(const struct PaSet *set, double *out);

// Closed-form Green's function with pole at infinity; `PA_STATUS_ORACLE_UNAVAILABLE`
// when the set has none.
//
// # Safety
// `set` must be a live handle; `out` valid for writes.
enum PaStatus pa_green_oracle(const struct PaSet *set, double re, double im, double *out);

// Leja sequence of `degree + 1` points on the boundary mesh at `resolution`.
//
// # Safety
// `set` must be a live handle; `out` valid for writes.
enum PaStatus pa_nodes_leja(const struct PaSet *set,
                            double resolution,
                            size_t degree,
                            struct PaNodes **out);

// # Safety
// `nodes` must be a live handle; `out` valid for writes.
enum PaStatus pa_nodes_len(const struct PaNodes *nodes, size_t *out);

// # Safety
// `nodes` must be a live handle; `re`, `im` valid for writes.
enum PaStatus pa_nodes_get(const struct PaNodes *nodes, size_t index, double *re, double *im);

// Green's function estimated from the nodes' nodal polynomial.
//
// # Safety
// `nodes` must be a live handle; `out` valid for writes.
enum PaStatus pa_green_nodal(const struct PaNodes *nodes, double re, double im, double *out);

// # Safety
// `nodes` must be null or come from `pa_nodes_leja` and not be freed twice.
void pa_nodes_free(struct PaNodes *nodes);

// Solver for degrees up to `max_degree` on the boundary mesh at `resolution`, which needs
// at least `8·max_degree` points.
//
// # Safety
// `set` must be a live handle; `out` valid for writes.
enum PaStatus pa_solver_new(const struct PaSet *set,
                            double resolution,
                            size_t max_degree,
                            struct PaSolver **out);

// `Φₙ(z)` on the mesh: `value` is attained by a witness polynomial, `upper` is a certified
// upper bound. Either output pointer may be null.
//
// # Safety
// `solver` must be a live handle; non-null outputs valid for writes.
enum PaStatus pa_solver_phi(const struct PaSolver *solver,
                            size_t n,
                            double re,
                            double im,
                            double *value,
                            double *upper);

// # Safety
// `solver` must be null or come from `pa_solver_new` and not be freed twice.
void pa_solver_free(struct PaSolver *solver);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POTAPPROX_H */
