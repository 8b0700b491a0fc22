#include <stdio.h>
#include <string.h>

#include "splitcert/splitcert.h"

int main(void) {
  sc_run_config c;
  sc_trace* t = NULL;
  char* json = NULL;
  int passed = 0;

  sc_run_config_init(&c);
  c.problem_id = "quad_abs_1d";
  c.algo = "fb";
  c.T = 100;
  if (sc_run(&c, &t) != SC_OK) {
    fprintf(stderr, "run: %s\n", sc_last_error());
    return 1;
  }
  if (sc_certify(t, "auto", 0.0, 0.0, SC_ITERATES_ALL, &passed, &json) != SC_OK || !passed) {
    fprintf(stderr, "certify: %s\n", sc_last_error());
    sc_trace_destroy(t);
    return 1;
  }
  if (strstr(json, "\"verdict\"") == NULL) return 1;
  sc_string_free(json);
  sc_trace_destroy(t);

  c.algo = "dr";
  c.problem_id = "box_l1";
  if (sc_run(&c, &t) != SC_ERR_CONFIG) return 1;
  printf("ok\n");
  return 0;
}
