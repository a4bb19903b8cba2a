#ifndef HOLEFORGE_H
#define HOLEFORGE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HfStatus {
  HF_STATUS_OK = 0,
  HF_STATUS_PARSE_ERROR = 1,
  HF_STATUS_TYPE_ERROR = 2,
  HF_STATUS_NO_CANDIDATES = 3,
  HF_STATUS_INVALID_ARGUMENT = 4,
  HF_STATUS_PANIC = 5,
} HfStatus;

// Opaque synthesis session.
typedef struct HfSession HfSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer
// stays valid until the next call into this library on the same thread.
const char *hf_last_error_message(void);

// Creates a session with the default budget, optionally loading the
// bundled prelude.
//
// # Safety
// `out` must be a valid pointer to writable storage for one pointer.
enum HfStatus hf_session_new(bool with_prelude, struct HfSession **out);

// Sets the search budget. Every value must be positive.
//
// # Safety
// `session` must come from [`hf_session_new`] and not yet be freed.
enum HfStatus hf_session_set_budget(struct HfSession *session,
                                    size_t max_app_depth,
                                    size_t max_case_depth,
                                    size_t max_candidates);

// Fills every hole of the NUL-terminated source `src` and stores a JSON
// report in `*out_json` (free it with [`hf_string_free`]). The report is
// also produced when some hole has no candidates, in which case the
// status is `NoCandidates`.
//
// # Safety
// `session` must come from [`hf_session_new`]; `src` must be a valid
// NUL-terminated string; `out_json` must be valid for one pointer write.
enum HfStatus hf_session_fill_json(const struct HfSession *session,
                                   const char *src,
                                   char **out_json);

// Frees a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must be NULL or a pointer returned by this library, not yet freed.
void hf_string_free(char *s);

// Frees a session. NULL is ignored.
//
// # Safety
// `session` must be NULL or come from [`hf_session_new`], not yet freed.
void hf_session_free(struct HfSession *session);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOLEFORGE_H */
