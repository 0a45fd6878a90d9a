#ifndef CINF_H
#define CINF_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define CINF_OK 0

#define CINF_FINDING 1

#define CINF_INPUT_ERROR 2

#define CINF_INTERNAL_ERROR 3

#define CINF_NULL_ARGUMENT -1

#define CINF_INVALID_UTF8 -2

#define CINF_INVALID_ARGUMENT -3

#define CINF_PANIC -4

#define CINF_COCHAIN_HARRISON 0

#define CINF_COCHAIN_DUAL 1

#define CINF_COCHAIN_CYCLIC 2

#define CINF_OBS_PLAIN 0

#define CINF_OBS_SYMPLECTIC 1

#define CINF_OBS_UNITAL 2

// A parsed algebra document.
typedef struct CinfAlgebra CinfAlgebra;

// A parsed morphism document.
typedef struct CinfMorphism CinfMorphism;

// The outcome of one command.
typedef struct CinfReport CinfReport;

// A parsed structure document.
typedef struct CinfStructure CinfStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parse an algebra document. Basis, product table and (when present)
// pairing are validated up front, so later commands only fail on the
// structure or on the requested computation.
//
// # Safety
// `json` must be a valid NUL-terminated string and `out` a valid pointer.
int32_t cinf_algebra_parse(const char *json, struct CinfAlgebra **out);

// Number of basis elements, or 0 for a null handle.
//
// # Safety
// `alg` must be null or a live handle.
size_t cinf_algebra_rank(const struct CinfAlgebra *alg);

// # Safety
// `alg` must be null or a handle from [`cinf_algebra_parse`] not yet freed.
void cinf_algebra_free(struct CinfAlgebra *alg);

// Parse a structure document. Its terms are checked against an algebra only
// when a command uses it.
//
// # Safety
// `json` must be a valid NUL-terminated string and `out` a valid pointer.
int32_t cinf_structure_parse(const char *json, struct CinfStructure **out);

// # Safety
// `s` must be null or a handle from [`cinf_structure_parse`] not yet freed.
void cinf_structure_free(struct CinfStructure *s);

// Parse a morphism document.
//
// # Safety
// `json` must be a valid NUL-terminated string and `out` a valid pointer.
int32_t cinf_morphism_parse(const char *json, struct CinfMorphism **out);

// # Safety
// `m` must be null or a handle from [`cinf_morphism_parse`] not yet freed.
void cinf_morphism_free(struct CinfMorphism *m);

// Validate the algebra and, if `structure` is non-null, the structure.
//
// # Safety
// Handles must be live (`structure` may be null); `out` must be valid.
int32_t cinf_check(const struct CinfAlgebra *alg,
                   const struct CinfStructure *structure,
                   size_t max_arity,
                   struct CinfReport **out);

// Cohomology table up to order `window`; `flavor` is a `CINF_COCHAIN_*` value.
//
// # Safety
// `alg` must be live and `out` valid.
int32_t cinf_cohomology(const struct CinfAlgebra *alg,
                        int32_t flavor,
                        bool normalised,
                        size_t window,
                        struct CinfReport **out);

// Obstruction class of a structure, or with `extend` set an attempt to extend
// it one level. `level` 0 keeps the level from the document; `flavor` is a
// `CINF_OBS_*` value.
//
// # Safety
// Handles must be live (`structure` may be null); `out` must be valid.
int32_t cinf_obstruction(const struct CinfAlgebra *alg,
                         const struct CinfStructure *structure,
                         size_t level,
                         int32_t flavor,
                         bool extend,
                         struct CinfReport **out);

// Lift a structure to a symplectic one up to `order`.
//
// # Safety
// Handles must be live (`structure` may be null); `out` must be valid.
int32_t cinf_lift(const struct CinfAlgebra *alg,
                  const struct CinfStructure *structure,
                  size_t order,
                  bool unital,
                  bool two_step_crosscheck,
                  struct CinfReport **out);

// Lift a morphism between two symplectic structures to a symplectic morphism.
//
// # Safety
// All handles must be live and `out` valid.
int32_t cinf_lift_morphism(const struct CinfAlgebra *alg,
                           const struct CinfStructure *source,
                           const struct CinfStructure *target,
                           const struct CinfMorphism *morphism,
                           size_t order,
                           bool unital,
                           struct CinfReport **out);

// Check the Cartan identities on `samples` seeded random instances.
//
// # Safety
// `out` must be valid.
int32_t cinf_verify_cartan(size_t samples, uint64_t seed, struct CinfReport **out);

// Run a command line exactly as the `cinf` binary would, without the program
// name. `--json` makes no difference here; both renderings are kept.
//
// # Safety
// `argv` must point to `argc` valid NUL-terminated strings; `out` must be valid.
int32_t cinf_run(const char *const *argv, size_t argc, struct CinfReport **out);

// The report's exit code, or -1 for a null handle.
//
// # Safety
// `r` must be null or a live report.
int32_t cinf_report_exit_code(const struct CinfReport *r);

// The report as JSON. The string is owned by the report.
//
// # Safety
// `r` must be null or a live report.
const char *cinf_report_json(const struct CinfReport *r);

// The report as text. The string is owned by the report.
//
// # Safety
// `r` must be null or a live report.
const char *cinf_report_text(const struct CinfReport *r);

// # Safety
// `r` must be null or a report not yet freed.
void cinf_report_free(struct CinfReport *r);

// Message for the most recent failure on this thread: a JSON error object
// for input errors, plain text otherwise. Valid until the next call into the
// library from the same thread.
const char *cinf_last_error(void);

// Library version as a static string.
const char *cinf_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CINF_H */
