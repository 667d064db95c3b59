#ifndef MODSM_H
#define MODSM_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum ModsmStatus {
  MODSM_STATUS_OK = 0,
  MODSM_STATUS_NULL_ARGUMENT = 1,
  MODSM_STATUS_INVALID_UTF8 = 2,
  MODSM_STATUS_SYNTAX = 3,
  MODSM_STATUS_FORMAT = 4,
  MODSM_STATUS_INVALID_MODULE = 5,
  MODSM_STATUS_COMPOSITION = 6,
  MODSM_STATUS_CAP_EXCEEDED = 7,
  MODSM_STATUS_UNSUPPORTED = 8,
  MODSM_STATUS_MISMATCH = 9,
  MODSM_STATUS_IO = 10,
  MODSM_STATUS_PANIC = 11,
  MODSM_STATUS_OTHER = 12,
} ModsmStatus;

// An opaque set of stable models, each rendered as `{a,b}`.
typedef struct ModsmModelSet ModsmModelSet;

// An opaque module `⟨R, I, O, H⟩`.
typedef struct ModsmModule ModsmModule;

// The message of the last failed call on this thread, or null. Valid until
// the next call into the library on the same thread.
const char *modsm_last_error(void);

const char *modsm_version(void);

// Parses a module in the text format.
//
// # Safety
// `src` must be a NUL-terminated string and `out` a valid pointer.
enum ModsmStatus modsm_module_parse_text(const char *src, struct ModsmModule **out);

// Decodes a module in the numeric format.
//
// # Safety
// `data` must point to `len` readable bytes and `out` must be valid.
enum ModsmStatus modsm_module_decode_smodels(const uint8_t *data,
                                             size_t len,
                                             struct ModsmModule **out);

// # Safety
// `m` must be a live module; `out` must be valid.
enum ModsmStatus modsm_module_print_text(const struct ModsmModule *m, char **out);

// # Safety
// `m` must be a live module; `out` and `len` must be valid.
enum ModsmStatus modsm_module_encode_smodels(const struct ModsmModule *m,
                                             uint8_t **out,
                                             size_t *len);

// Number of rules, or 0 for null.
//
// # Safety
// `m` must be null or a live module.
size_t modsm_module_rule_count(const struct ModsmModule *m);

// Sizes of the input, output and hidden signatures.
//
// # Safety
// `m` must be a live module; the out-pointers must be valid or null.
enum ModsmStatus modsm_module_signature_sizes(const struct ModsmModule *m,
                                              size_t *input,
                                              size_t *output,
                                              size_t *hidden);

// `a ⊕ b`.
//
// # Safety
// `a`, `b` must be live modules; `out` must be valid.
enum ModsmStatus modsm_compose(const struct ModsmModule *a,
                               const struct ModsmModule *b,
                               struct ModsmModule **out);

// `a ⊔ b`.
//
// # Safety
// `a`, `b` must be live modules; `out` must be valid.
enum ModsmStatus modsm_join(const struct ModsmModule *a,
                            const struct ModsmModule *b,
                            struct ModsmModule **out);

// Stable models of `m`. `max_atoms` caps enumeration; 0 selects the
// default cap.
//
// # Safety
// `m` must be a live module; `out` must be valid.
enum ModsmStatus modsm_stable_models(const struct ModsmModule *m,
                                     size_t max_atoms,
                                     struct ModsmModelSet **out);

// # Safety
// `s` must be null or a live model set.
size_t modsm_model_set_len(const struct ModsmModelSet *s);

// The `index`-th model as `{a,b}`, or null when out of range. The string
// is owned by the set.
//
// # Safety
// `s` must be null or a live model set.
const char *modsm_model_set_get(const struct ModsmModelSet *s, size_t index);

// Modular equivalence of `p` and `q`. `method` is a [`ModsmMethod`] value.
//
// # Safety
// `p`, `q` must be live modules; `out` must be valid.
enum ModsmStatus modsm_modular_eq(const struct ModsmModule *p,
                                  const struct ModsmModule *q,
                                  uint32_t method,
                                  size_t max_atoms,
                                  bool *out);

// Whether `m` has the EVA property.
//
// # Safety
// `m` must be a live module; `out` must be valid.
enum ModsmStatus modsm_eva(const struct ModsmModule *m, size_t max_atoms, bool *out);

// # Safety
// `m` must be null or a module not yet freed.
void modsm_module_free(struct ModsmModule *m);

// # Safety
// `s` must be null or a model set not yet freed.
void modsm_model_set_free(struct ModsmModelSet *s);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void modsm_string_free(char *s);

// # Safety
// `data`, `len` must come from [`modsm_module_encode_smodels`].
void modsm_bytes_free(uint8_t *data, size_t len);

#endif  /* MODSM_H */
