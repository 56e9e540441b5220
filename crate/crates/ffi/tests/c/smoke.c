#include <math.h>
#include <stdio.h>
#include <string.h>
#include "fracspline.h"

int main(void) {
    FsComplex g;
    if (fs_gamma(5.0, 0.0, &g) != FS_STATUS_OK || fabs(g.re - 24.0) > 1e-12) return 1;
    if (fs_gamma(-2.0, 0.0, &g) != FS_STATUS_POLE) return 2;

    FsBSpline *s = NULL;
    if (fs_bspline_new(0.5, 0.0, &s) != FS_STATUS_INVALID_ORDER || s != NULL) return 3;
    if (fs_bspline_new(2.0, 0.0, &s) != FS_STATUS_OK) return 4;
    FsComplex v;
    int loss = -1;
    if (fs_bspline_eval_time(s, 1.0, &v, &loss) != FS_STATUS_OK) return 5;
    if (fabs(v.re - 1.0) > 1e-12 || loss != 0) return 6;
    if (fs_bspline_eval_freq(s, 0.0, &v) != FS_STATUS_OK || v.re != 1.0 || v.im != 0.0) return 7;
    if (fs_bspline_eval_time(NULL, 1.0, &v, NULL) != FS_STATUS_NULL_POINTER) return 8;
    fs_bspline_free(s);

    char *json = NULL;
    if (fs_verify_suite("nope", 7, &json) != FS_STATUS_INVALID_ARGUMENT) return 9;
    if (strlen(fs_status_message(FS_STATUS_POLE)) == 0) return 10;
    printf("ok\n");
    return 0;
}
