#include <stdio.h>
#include "siegel_theta.h"

int main(void) {
    double re[1] = {0.0}, im[1] = {1.0};
    SthComplex out;
    SthStatus st = sth_theta_eval(1, re, im, NULL, NULL, "[0;0]", 1e-14, &out);
    if (st != STH_STATUS_OK) {
        fprintf(stderr, "%s\n", sth_last_error());
        return 1;
    }
    printf("theta %.13f %.3g\n", out.re, out.im);

    st = sth_theta_eval(1, re, im, NULL, NULL, "[1/2;", 1e-12, &out);
    printf("error %d %s\n", (int)st, sth_last_error());

    SthContext *ctx = NULL;
    if (sth_context_new(1e-12, &ctx) != STH_STATUS_OK)
        return 1;
    long long x[3] = {1, 2, 2};
    char *js = NULL;
    st = sth_artin_action(ctx, (const int64_t *)x, 3, 7, "[1/7,0;0,0]", &js);
    if (st != STH_STATUS_OK)
        return 1;
    printf("%s\n", js);
    sth_string_free(js);
    sth_context_free(ctx);
    return 0;
}
