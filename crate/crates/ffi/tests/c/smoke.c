#include <math.h>
#include <stdio.h>
#include <string.h>

#include "grasslp.h"

#define CHECK(cond)                                                  \
  do {                                                               \
    if (!(cond)) {                                                   \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
      return 1;                                                      \
    }                                                                \
  } while (0)

int main(void) {
  GlZonalTable *t = NULL;
  CHECK(grasslp_zonal_table_new(2, 4, 2, &t) == GL_STATUS_OK);
  uint32_t kappa[] = {1};
  char buf[64];
  size_t needed = 0;
  CHECK(grasslp_zonal_render(t, kappa, 1, buf, sizeof buf, &needed) == GL_STATUS_OK);
  CHECK(strcmp(buf, "m(1) - 1") == 0);
  double y[] = {0.5, 0.5}, v = 0.0;
  CHECK(grasslp_zonal_eval(t, kappa, 1, y, 2, &v) == GL_STATUS_OK);
  CHECK(fabs(v) < 1e-15);
  grasslp_zonal_table_free(t);

  CHECK(grasslp_bound(2, 4, 0.5, GL_METHOD_SIMPLEX, 0, &v) == GL_STATUS_OK);
  CHECK(v == 3.0);
  CHECK(grasslp_bound(2, 4, 3.0, GL_METHOD_SIMPLEX, 0, &v) == GL_STATUS_DOMAIN);
  CHECK(grasslp_last_error(buf, sizeof buf, &needed) == GL_STATUS_OK || needed > sizeof buf);

  GlJacobi *j = NULL;
  CHECK(grasslp_jacobi_new(2, 8, 3, GL_SOURCE_CLOSED_FORM, &j) == GL_STATUS_OK);
  CHECK(grasslp_jacobi_lambda_max(j, &v, NULL) == GL_STATUS_OK);
  CHECK(v > 0.0 && v < 2.0);
  grasslp_jacobi_free(j);
  printf("ok %s\n", grasslp_version());
  return 0;
}
