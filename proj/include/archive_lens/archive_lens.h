/* archive_lens C API.
 *
 * Every function returns an al_status. On failure al_last_error() describes
 * the problem for the calling thread. Strings handed out through char** must
 * be released with al_free_string(). */
#ifndef ARCHIVE_LENS_H
#define ARCHIVE_LENS_H

#include <stddef.h>

#if defined(ARCHIVE_LENS_BUILDING_LIBRARY)
#define AL_API __attribute__((visibility("default")))
#else
#define AL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum al_status {
  AL_OK = 0,
  AL_ERR_INVALID_ARGUMENT = 1,
  AL_ERR_IO = 2,
  AL_ERR_MALFORMED_XML = 3,
  AL_ERR_MALFORMED_INPUT = 4,
  AL_ERR_PROTOCOL = 5,
  AL_ERR_TRANSPORT = 6,
  AL_ERR_CONFIG = 7,
  AL_ERR_CYCLE = 8,
  AL_ERR_ORPHAN_PARENT = 9,
  AL_ERR_DEPTH = 10,
  AL_ERR_DUPLICATE_CODE = 11,
  AL_ERR_DUPLICATE_LABEL = 12,
  AL_ERR_MALFORMED_LINE = 13,
  AL_ERR_SPEC = 14,
  AL_ERR_ARITY = 15,
  AL_ERR_UNKNOWN_CATEGORY = 16,
  AL_ERR_EMPTY_INPUT = 17,
  AL_ERR_NON_POSITIVE_WEIGHT = 18,
  AL_ERR_EMPTY_TREE = 19,
  AL_ERR_INTERNAL = 100
} al_status;

typedef struct al_snapshot al_snapshot;
typedef struct al_service al_service;
typedef struct al_server al_server;

AL_API const char* al_version(void);
AL_API const char* al_last_error(void);
/* Machine-readable name of the last error, e.g. "UnknownCategory". */
AL_API const char* al_last_error_code(void);
AL_API const char* al_status_name(al_status status);
AL_API void al_free_string(char* s);

/* ---- harvesting ------------------------------------------------------- */

typedef struct al_harvest_options {
  const char* base_url;
  const char* metadata_prefix; /* NULL = oai_dc */
  const char* set_filter;      /* NULL = full crawl */
  const char* from;            /* YYYY-MM-DD[Thh:mm:ssZ] or NULL */
  const char* until;
  int max_pages; /* 0 = no limit */
  int max_attempts;
  int backoff_initial_ms;
  double backoff_factor;
} al_harvest_options;

AL_API void al_harvest_options_init(al_harvest_options* options);

/* Writes every harvested record (deleted ones included) as JSON lines. */
AL_API al_status al_harvest_to_file(const al_harvest_options* options, const char* out_path, char** summary_json);

/* ---- snapshots -------------------------------------------------------- */

/* raw_path: JSON-lines export or OAI-PMH XML. source: "harvest", "dump",
 * "synthetic" or NULL (dump). taken_at may be NULL. */
AL_API al_status al_build_snapshot(const char* raw_path, const char* tree_path, const char* rights_config_path,
                                   const char* source, const char* taken_at, const char* out_dir,
                                   char** summary_json);

/* Generates a synthetic corpus from a JSON spec. seed < 0 keeps the spec's
 * seed. Any output path may be NULL to skip that file. */
AL_API al_status al_generate_corpus(const char* spec_json, long long seed, const char* raw_path, const char* tree_path,
                                    const char* truth_path, char** truth_json);

AL_API al_status al_snapshot_load(const char* dir, al_snapshot** out);
AL_API void al_snapshot_free(al_snapshot* snapshot);
AL_API size_t al_snapshot_record_count(const al_snapshot* snapshot);

/* report: "stats", "histogram", "rollups", "depositors", "breakdown".
 * argument: exclude code for "breakdown", NULL otherwise. */
AL_API al_status al_snapshot_report_json(const al_snapshot* snapshot, const char* report, const char* argument,
                                         char** out);
AL_API al_status al_snapshot_stats_json(const al_snapshot* snapshot, char** out);
/* embargo_path: file with one easy_id per line, or NULL. */
AL_API al_status al_snapshot_consistency_json(const al_snapshot* snapshot, const char* embargo_path, char** out);

/* kind: "treemap", "circlepack", "tree". group/exclude only apply to
 * treemaps; NULL selects defaults. svg_out may be NULL. */
AL_API al_status al_layout(const al_snapshot* snapshot, const char* kind, const char* group, const char* exclude,
                           const char* mode, char** json_out, char** svg_out);

/* ---- service ---------------------------------------------------------- */

/* snapshot may be NULL (every endpoint then answers 503). The service keeps
 * its own reference; the snapshot handle may be freed afterwards. */
AL_API al_status al_service_create(const al_snapshot* snapshot, const char* embargo_path, al_service** out);
AL_API void al_service_free(al_service* service);
/* query: raw query string without '?', may be NULL. */
AL_API al_status al_service_handle(const al_service* service, const char* path, const char* query, int* http_status,
                                   char** body);

AL_API al_status al_server_create(const al_service* service, const char* host, int port, const char* static_dir,
                                  int cors, al_server** out);
/* Binds the socket; *bound_port receives the actual port. */
AL_API al_status al_server_bind(al_server* server, int* bound_port);
/* Blocks until al_server_stop() is called from another thread or a signal handler. */
AL_API al_status al_server_run(al_server* server);
AL_API void al_server_wait_until_ready(al_server* server);
AL_API void al_server_stop(al_server* server);
AL_API void al_server_free(al_server* server);

#ifdef __cplusplus
}
#endif

#endif
