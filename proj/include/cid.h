/* Copyright 2026 The CID Engine Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the causal-influence-diagram engine. All functions return a
 * cid_status; outputs are written through out-parameters only on CID_OK.
 * Strings returned through `char**` are heap-allocated and must be released
 * with cid_string_free. Models are opaque handles released with
 * cid_model_free. Error messages are per-thread; handles themselves are not
 * synchronized. */

#ifndef CID_H_
#define CID_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cid_status {
  CID_OK = 0,
  CID_PARSE_ERROR = 1,      /* input text/JSON cannot become a model */
  CID_VALIDATION_ERROR = 2, /* model built but violates an invariant */
  CID_USAGE_ERROR = 3,      /* bad arguments (unknown node, wrong kind, ...) */
  CID_RESOURCE_LIMIT = 4,   /* a configured cap would be exceeded */
  CID_IMPOSSIBLE_EVIDENCE = 5,
  CID_INTERNAL_ERROR = 6
} cid_status;

typedef struct cid_model cid_model;

const char* cid_version(void);

/* Message of the most recent failure on the calling thread ("" when none). */
const char* cid_last_error(void);

void cid_string_free(char* s);
void cid_model_free(cid_model* model);

/* Process-wide resource caps. */
void cid_set_max_factor_entries(uint64_t n);
void cid_set_max_policies(uint64_t n);
uint64_t cid_get_max_factor_entries(void);
uint64_t cid_get_max_policies(void);

/* Parsing and serialization. Strict variants require a valid model; the lax
 * variants load structurally sound but semantically broken models so they
 * can still be inspected with cid_model_validate. */
cid_status cid_model_parse(const char* text, cid_model** out);
cid_status cid_model_parse_lax(const char* text, cid_model** out);
cid_status cid_model_from_json(const char* text, cid_model** out);
cid_status cid_model_from_json_lax(const char* text, cid_model** out);
cid_status cid_model_serialize(const cid_model* model, char** out);
cid_status cid_model_to_json(const cid_model* model, char** out);

/* `ok` is 1/0; the report lists violations and warnings. */
cid_status cid_model_validate(const cid_model* model, int* ok,
                              char** report_json);

cid_status cid_model_dot(const cid_model* model, int color_agents, char** out);

/* Analyses. Reports are pretty-printed JSON with sorted keys.
 * `method` is one of "auto", "exhaustive", "backward" (NULL means auto);
 * `given_csv`/`via_csv`/`x_csv`/`y_csv` are comma-separated node names. */
cid_status cid_solve(const cid_model* model, const char* agent,
                     const char* method, char** report_json);
cid_status cid_expected_utility(const cid_model* model,
                                const char* policy_json, const char* agent,
                                char** report_json);
cid_status cid_dsep(const cid_model* model, const char* x_csv,
                    const char* y_csv, const char* given_csv,
                    char** report_json);
cid_status cid_mediates(const cid_model* model, const char* from,
                        const char* to, const char* via_csv,
                        char** report_json);
cid_status cid_incentives(const cid_model* model, const char* decision,
                          char** report_json);
cid_status cid_value_of_information(const cid_model* model, const char* agent,
                                    const char* decision, const char* obs,
                                    char** report_json);
cid_status cid_pure_nash(const cid_model* model, char** report_json);

/* Twin-network construction over the functionalized model. `do_csv` lists
 * forced outcomes on counterfactual copies, e.g. "Answer_cf=hidden". */
cid_status cid_twin(const cid_model* model, const char* do_csv,
                    cid_model** out);

/* Model catalog. `params_csv` is "key=value,..." (NULL for defaults). */
cid_status cid_zoo_list(char** report_json);
cid_status cid_zoo_build(const char* name, const char* params_csv,
                         cid_model** out);
cid_status cid_zoo_manifest(const char* name, char** manifest_json);
cid_status cid_wireheading_report(const char* params_csv, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* CID_H_ */
