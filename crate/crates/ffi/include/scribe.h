#ifndef SCRIBE_H
#define SCRIBE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum ScribeStatus {
  SCRIBE_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SCRIBE_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  SCRIBE_STATUS_INVALID_UTF8 = 2,
  /**
   * The input could not be parsed or failed validation.
   */
  SCRIBE_STATUS_INVALID_INPUT = 3,
  /**
   * An argument was out of range.
   */
  SCRIBE_STATUS_INVALID_ARGUMENT = 4,
  /**
   * A search exceeded its budget.
   */
  SCRIBE_STATUS_BUDGET_EXCEEDED = 5,
  /**
   * A geometric precondition failed (degenerate input, point inside ball, ...).
   */
  SCRIBE_STATUS_GEOMETRY = 6,
  /**
   * An internal error; the call had no effect.
   */
  SCRIBE_STATUS_INTERNAL = 7,
} ScribeStatus;

typedef enum ScribeProperty {
  SCRIBE_PROPERTY_INSCRIBABLE = 0,
  SCRIBE_PROPERTY_CIRCUMSCRIBABLE = 1,
  SCRIBE_PROPERTY_HYPERBOLOID = 2,
  SCRIBE_PROPERTY_CYLINDER = 3,
} ScribeProperty;

typedef enum ScribeAnswer {
  SCRIBE_ANSWER_YES = 0,
  SCRIBE_ANSWER_NO = 1,
  SCRIBE_ANSWER_UNKNOWN = 2,
} ScribeAnswer;

/**
 * Opaque spherical cap system.
 */
typedef struct ScribeCaps ScribeCaps;

/**
 * Opaque combinatorial map.
 */
typedef struct ScribeMap ScribeMap;

/**
 * Opaque point configuration.
 */
typedef struct ScribePoints ScribePoints;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *scribe_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void scribe_string_free(char *s);

/**
 * Parses a map file (JSON text).
 *
 * # Safety
 * `json_text` must be a NUL-terminated string; `out` must be writable.
 */
enum ScribeStatus scribe_map_from_json(const char *json_text, struct ScribeMap **out);

/**
 * A corpus map by name, e.g. "cube" or "triakis-tetrahedron".
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum ScribeStatus scribe_map_named(const char *name, struct ScribeMap **out);

/**
 * # Safety
 * `map` must be null or a handle from this library that has not been freed.
 */
void scribe_map_free(struct ScribeMap *map);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `map` must be null or a live handle.
 */
uintptr_t scribe_map_vertex_count(const struct ScribeMap *map);

/**
 * Decides one property with default budgets. When `certificate_json` is not
 * null it receives the full verdict, certificates included, as JSON.
 *
 * # Safety
 * `map` must be a live handle; `answer` must be writable; `certificate_json`
 * may be null.
 */
enum ScribeStatus scribe_decide(const struct ScribeMap *map,
                                enum ScribeProperty property,
                                enum ScribeAnswer *answer,
                                char **certificate_json);

/**
 * Full analysis report as JSON.
 *
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum ScribeStatus scribe_analyze_json(const struct ScribeMap *map, char **out);

/**
 * Parses a point file (JSON text) in exact mode.
 *
 * # Safety
 * `json_text` must be a NUL-terminated string; `out` must be writable.
 */
enum ScribeStatus scribe_points_from_json(const char *json_text, struct ScribePoints **out);

/**
 * # Safety
 * `points` must be null or a live handle.
 */
void scribe_points_free(struct ScribePoints *points);

/**
 * Whether all i-faces avoid and all j-faces cut the ball given in the file.
 *
 * # Safety
 * `points` must be a live handle; `holds` must be writable.
 */
enum ScribeStatus scribe_points_ij_scribed(const struct ScribePoints *points,
                                           uintptr_t i,
                                           uintptr_t j,
                                           bool *holds);

/**
 * Parses a cap file (JSON text).
 *
 * # Safety
 * `json_text` must be a NUL-terminated string; `out` must be writable.
 */
enum ScribeStatus scribe_caps_from_json(const char *json_text, struct ScribeCaps **out);

/**
 * Visibility caps of every point with respect to the configuration's sphere.
 *
 * # Safety
 * `points` must be a live handle; `out` must be writable.
 */
enum ScribeStatus scribe_caps_from_points(const struct ScribePoints *points,
                                          struct ScribeCaps **out);

/**
 * # Safety
 * `caps` must be null or a live handle.
 */
void scribe_caps_free(struct ScribeCaps *caps);

/**
 * Exact ply depth (dimension 3 only).
 *
 * # Safety
 * `caps` must be a live handle; `depth` must be writable.
 */
enum ScribeStatus scribe_caps_ply_depth(const struct ScribeCaps *caps, uintptr_t *depth);

/**
 * Random-hyperplane separator experiment report as JSON.
 *
 * # Safety
 * `caps` must be a live handle; `out` must be writable.
 */
enum ScribeStatus scribe_separator_json(const struct ScribeCaps *caps,
                                        uintptr_t trials,
                                        uint64_t seed,
                                        char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCRIBE_H */
