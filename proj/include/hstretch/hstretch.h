/* Copyright 2026 The hstretch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of libhstretch.
 *
 * Rationals travel as strings ("3/5", "2", "0.15"). Every function returns
 * an hs_status; on anything but HS_OK, hs_last_error() describes the failure
 * for the calling thread. Strings returned through char** out-parameters are
 * owned by the caller and released with hs_string_free().
 */

#ifndef HSTRETCH_HSTRETCH_H_
#define HSTRETCH_HSTRETCH_H_

#include <stdint.h>

#if defined(HSTRETCH_BUILDING)
#define HS_API __attribute__((visibility("default")))
#else
#define HS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hs_status {
  HS_OK = 0,
  HS_ERR_INPUT = 1,     /* bad argument, malformed rational or document */
  HS_ERR_TRACE = 2,     /* event breaks the failure model */
  HS_ERR_INVARIANT = 3, /* internal invariant broken */
  HS_ERR_LIMIT = 4,     /* instance too large for the exhaustive oracle */
  HS_ERR_INTERNAL = 5
} hs_status;

typedef struct hs_engine hs_engine;

HS_API const char* hs_last_error(void);
HS_API void hs_string_free(char* s);
HS_API const char* hs_version(void);

/* Live engine. */
HS_API hs_status hs_engine_create(int f, const char* eta, int check_every_event, hs_engine** out);
HS_API void hs_engine_destroy(hs_engine* engine);
HS_API hs_status hs_engine_arrive(hs_engine* engine, const char* size, int* item_id);
HS_API hs_status hs_engine_fail(hs_engine* engine, int bin);
HS_API hs_status hs_engine_recover(hs_engine* engine, int bin);
HS_API hs_status hs_engine_bin_count(const hs_engine* engine, int* out);
HS_API hs_status hs_engine_snapshot(const hs_engine* engine, char** json);
/* Placement and role-change records, one JSON object per line. */
HS_API hs_status hs_engine_log(const hs_engine* engine, char** jsonl);
/* JSON array of invariant violations; *count is its length. */
HS_API hs_status hs_engine_check(const hs_engine* engine, char** json, int* count);

/* Whole operations. `eta` may be NULL for the snapshot functions, in which
 * case the document's own config is used; f <= 0 means the same. */
HS_API hs_status hs_classify(const char* size, int f, const char* eta, int* primary_class, int* standby_class);

/* options_json may be NULL or an object with "grid", "max_size", "churn",
 * "target_size". */
HS_API hs_status hs_generate_trace(const char* mode, int n, uint64_t seed, int f, const char* eta,
                                   const char* options_json, char** jsonl);

/* Any of the output pointers may be NULL. *violations is set to the number of
 * invariant violations found (checking only when check_every_event != 0). */
HS_API hs_status hs_run_trace(const char* jsonl, int f, const char* eta, int check_every_event, char** snapshot_json,
                              char** log_jsonl, char** metrics_json, int* violations);

/* *valid is 1 or 0; verdict_json holds {"valid", "witness", "structural"}. */
HS_API hs_status hs_validate_snapshot(const char* snapshot_json, int f, const char* eta, int* valid,
                                      char** verdict_json);

/* sizes_csv: "3/5,1/2". max_items <= 0 selects the default limit. */
HS_API hs_status hs_optimal_packing(const char* sizes_csv, int f, const char* eta, int max_items, int* bins,
                                    char** result_json);
HS_API hs_status hs_dedicated_packing(const char* sizes_csv, int f, const char* eta, char** snapshot_json);

/* *ok is 1 when both weight bounds hold. */
HS_API hs_status hs_audit_snapshot(const char* snapshot_json, int f, const char* eta, int* ok, char** report_json);

/* algos_csv: any of "hs", "dedicated", "opt". Emits a CSV table. */
HS_API hs_status hs_compare(const char* jsonl, int f, const char* eta, const char* algos_csv, int max_items,
                            char** csv);

#ifdef __cplusplus
}
#endif

#endif /* HSTRETCH_HSTRETCH_H_ */
