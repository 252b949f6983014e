// Copyright 2026 The zulf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/* Exercises the C interface from plain C. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "zulf/zulf.h"

static int failures = 0;

#define EXPECT(cond)                                               \
  do {                                                             \
    if (!(cond)) {                                                 \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                  \
    }                                                              \
  } while (0)

int main(void) {
  zulf_system* sys = NULL;
  EXPECT(zulf_system_preset("formic_acid", &sys) == ZULF_OK);
  EXPECT(zulf_system_size(sys) == 2);

  const double field[3] = {0.0, 0.0, 1e-7};
  const double guide[3] = {0.0, 0.0, 1.0};
  zulf_line lines[8];
  size_t count = 0;
  EXPECT(zulf_catalogue(sys, field, NULL, guide, lines, 8, &count) == ZULF_OK);
  EXPECT(count == 1);
  EXPECT(fabs(lines[0].frequency_hz - 222.2) < 0.05);

  EXPECT(zulf_catalogue(sys, field, NULL, guide, NULL, 0, &count) == ZULF_OK);
  EXPECT(count == 1);
  zulf_system_free(sys);

  EXPECT(zulf_system_preset("unobtainium", &sys) == ZULF_ERR_DOMAIN);
  EXPECT(strstr(zulf_last_error(), "formic_acid") != NULL);
  EXPECT(zulf_exit_code_for_status(ZULF_ERR_DOMAIN) == 2);

  double b = 0.0;
  EXPECT(zulf_magnitude_from_splitting(5.74840, 1, 0, ZULF_MODE_FIELD, &b) == ZULF_OK);
  EXPECT(fabs(b - 1.0788e-7) < 1e-11);
  EXPECT(zulf_magnitude_from_splitting(-1.0, 1, 0, ZULF_MODE_FIELD, &b) == ZULF_ERR_DOMAIN);

  zulf_config* cfg = NULL;
  EXPECT(zulf_config_new(&cfg) == ZULF_OK);
  EXPECT(zulf_config_set(cfg, "molecule", "acetonitrile") == ZULF_OK);
  EXPECT(zulf_config_set(cfg, "benchmark.trials", "250") == ZULF_OK);
  EXPECT(zulf_config_set(cfg, "benchmark.trials", "\"many\"") == ZULF_ERR_PARSE);
  EXPECT(zulf_config_set(cfg, "nonsense", "1") == ZULF_ERR_PARSE);
  char* text = NULL;
  EXPECT(zulf_config_to_json(cfg, &text) == ZULF_OK);
  EXPECT(text && strstr(text, "\"acetonitrile\"") != NULL);
  EXPECT(text && strstr(text, "250") != NULL);
  zulf_string_free(text);

  zulf_result* res = NULL;
  EXPECT(zulf_run("presets", cfg, &res) == ZULF_OK);
  EXPECT(zulf_result_exit_code(res) == 0);
  EXPECT(strstr(zulf_result_summary(res), "acetic_acid") != NULL);
  zulf_result_free(res);
  EXPECT(zulf_run("frobnicate", cfg, &res) == ZULF_ERR_PARSE);
  EXPECT(zulf_run(NULL, cfg, &res) == ZULF_ERR_ARGUMENT);
  zulf_config_free(cfg);

  EXPECT(zulf_config_from_json("{\"molecule\": 1}", "inline", &cfg) == ZULF_ERR_PARSE);
  EXPECT(strstr(zulf_last_error(), "inline") != NULL);
  EXPECT(zulf_command_count() == 6);
  EXPECT(zulf_command_name(99) == NULL);

  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}
