#include <stdio.h>
#include <string.h>
#include "pathcat.h"

int main(void) {
    PathcatCategory *c = NULL;
    PathcatPathCategory *p = NULL;
    size_t n = 0;
    if (pathcat_category_interval(1, &c) != PATHCAT_STATUS_OK) return 10;
    if (pathcat_category_arrow_count(c, &n) != PATHCAT_STATUS_OK || n != 3) return 11;
    if (pathcat_path_category_build(c, 2, &p) != PATHCAT_STATUS_OK) return 12;
    if (pathcat_path_category_hom_size(p, 1, 0, &n) != PATHCAT_STATUS_OK || n != 0) return 13;
    if (pathcat_path_category_hom_size(p, 5, 0, &n) != PATHCAT_STATUS_OUT_OF_RANGE) return 14;
    char msg[128];
    if (pathcat_last_error(msg, sizeof msg, NULL) != PATHCAT_STATUS_OK || strlen(msg) == 0) return 15;
    pathcat_path_category_free(p);
    pathcat_category_free(c);

    if (pathcat_delta_hom_count(3, 2, &n) != PATHCAT_STATUS_OK || n != 4) return 16;

    const char *argv[] = {"pathcat", "simplicial", "--points", "1"};
    PathcatReport *r = NULL;
    int code = -1;
    if (pathcat_run(4, argv, &r) != PATHCAT_STATUS_OK) return 17;
    if (pathcat_report_exit_code(r, &code) != PATHCAT_STATUS_OK || code != 0) return 18;
    size_t needed = 0;
    pathcat_report_stdout(r, NULL, 0, &needed);
    char out[8192];
    if (needed > sizeof out || pathcat_report_stdout(r, out, sizeof out, NULL) != PATHCAT_STATUS_OK) return 19;
    pathcat_report_free(r);
    printf("%s", out);
    return 0;
}
