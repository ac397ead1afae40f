/* C interface to the AgarCL environment.
 *
 * All functions return an agarcl_status; on failure agarcl_last_error()
 * returns a message for the calling thread. Handles are not thread-safe:
 * use one env per thread. String outputs follow one convention: the text is
 * written to buf when cap > its length (NUL-terminated), *len always receives
 * the length without the NUL, and AGARCL_E_BUFFER_TOO_SMALL is returned when
 * it does not fit. */
#ifndef AGARCL_H
#define AGARCL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AGARCL_API __declspec(dllexport)
#else
#define AGARCL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define AGARCL_ABI_VERSION 1u

typedef enum agarcl_status {
  AGARCL_OK = 0,
  AGARCL_E_INVALID_ARGUMENT = 1, /* null pointer, out-of-range enum */
  AGARCL_E_CONFIG = 2,           /* unknown scenario, invariant violation, bad YAML */
  AGARCL_E_PROTOCOL = 3,         /* step after episode end, reset on continual, bad action */
  AGARCL_E_CONSTRUCTION = 4,     /* world could not be placed */
  AGARCL_E_DOMAIN = 5,
  AGARCL_E_IO = 6,
  AGARCL_E_BUFFER_TOO_SMALL = 7,
  AGARCL_E_INTERNAL = 8
} agarcl_status;

typedef enum agarcl_obs_mode { AGARCL_OBS_PIXEL = 0, AGARCL_OBS_SYMBOLIC = 1 } agarcl_obs_mode;

typedef enum agarcl_discrete { AGARCL_NONE = 0, AGARCL_SPLIT = 1, AGARCL_EJECT = 2 } agarcl_discrete;

typedef struct agarcl_env agarcl_env;

typedef struct agarcl_env_options {
  uint32_t frame_skip; /* 0: scenario default */
  int32_t has_noise_std;
  double noise_std; /* used when has_noise_std != 0 */
  int32_t obs_mode; /* agarcl_obs_mode */
} agarcl_env_options;

typedef struct agarcl_step_result {
  double reward;
  int32_t terminated;
  int32_t truncated;
  double mass;
  uint32_t deaths;
  uint64_t tick;
  uint64_t events_digest;
} agarcl_step_result;

typedef struct agarcl_env_info {
  uint64_t tick;
  uint64_t steps;
  uint64_t episode;
  uint64_t seed;
  double mass;
  double noise_std;
  uint32_t frame_skip;
  uint32_t obs_resolution;
  int32_t obs_mode;
  int32_t episodic;
  uint32_t max_steps;
  int32_t episode_over;
} agarcl_env_info;

AGARCL_API uint32_t agarcl_abi_version(void);
AGARCL_API const char* agarcl_version(void);
AGARCL_API const char* agarcl_last_error(void);
AGARCL_API const char* agarcl_status_name(agarcl_status status);

/* options may be NULL. */
AGARCL_API agarcl_status agarcl_env_create(const char* scenario, uint64_t seed, const agarcl_env_options* options,
                                           agarcl_env** out);
AGARCL_API agarcl_status agarcl_env_create_from_yaml(const char* yaml, uint64_t seed,
                                                     const agarcl_env_options* options, agarcl_env** out);
AGARCL_API agarcl_status agarcl_env_create_from_file(const char* path, uint64_t seed,
                                                     const agarcl_env_options* options, agarcl_env** out);
AGARCL_API void agarcl_env_destroy(agarcl_env* env);

AGARCL_API agarcl_status agarcl_env_reset(agarcl_env* env);
AGARCL_API agarcl_status agarcl_env_step(agarcl_env* env, double cursor_x, double cursor_y, uint8_t discrete,
                                         agarcl_step_result* out);

/* Zero-copy view of the pixel observation, plane-major [channel][row][col],
 * float32, 4 channels. Valid until the next step, reset or destroy. */
AGARCL_API agarcl_status agarcl_env_pixels(agarcl_env* env, const float** data, uint32_t* resolution);
AGARCL_API agarcl_status agarcl_env_symbolic_json(agarcl_env* env, char* buf, size_t cap, size_t* len);
AGARCL_API agarcl_status agarcl_env_info_get(const agarcl_env* env, agarcl_env_info* out);
AGARCL_API agarcl_status agarcl_env_state_hash(const agarcl_env* env, uint64_t* out);
AGARCL_API agarcl_status agarcl_env_config_digest(const agarcl_env* env, uint64_t* out);
/* Fully expanded scenario of this env (effective frame skip and noise). */
AGARCL_API agarcl_status agarcl_env_scenario_yaml(const agarcl_env* env, char* buf, size_t cap, size_t* len);
AGARCL_API agarcl_status agarcl_env_scenario_name(const agarcl_env* env, char* buf, size_t cap, size_t* len);
/* Action a heuristic bot ("hungry", "aggressive_shy", ...) would take as the agent. */
AGARCL_API agarcl_status agarcl_env_bot_action(const agarcl_env* env, const char* kind, double* cursor_x,
                                               double* cursor_y, uint8_t* discrete);

AGARCL_API size_t agarcl_catalog_count(void);
/* The returned pointer is owned by the library and lives until unload. */
AGARCL_API agarcl_status agarcl_catalog_name(size_t index, const char** name);
AGARCL_API agarcl_status agarcl_catalog_scenario_yaml(const char* name, char* buf, size_t cap, size_t* len);
/* AGARCL_OK when the shipped catalog is clean; AGARCL_E_CONFIG with one
 * problem per line in buf otherwise. */
AGARCL_API agarcl_status agarcl_validate_catalog(char* buf, size_t cap, size_t* len);

#ifdef __cplusplus
}
#endif

#endif /* AGARCL_H */
