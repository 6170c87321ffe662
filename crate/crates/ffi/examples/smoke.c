#include <stdio.h>
#include "fp_selberg.h"

int main(void) {
    FpsField *f = NULL;
    if (fps_field_new(11, &f) != FPS_STATUS_OK) {
        fprintf(stderr, "%s\n", fps_last_error_message());
        return 1;
    }
    FpsSelbergParams s = {2, 7, 9, 3};
    uint64_t v = 0;
    FpsStatus st = fps_selberg_s(f, &s, &v);
    printf("S_2(7, 9, 3) mod 11 = %llu (status %d)\n", (unsigned long long)v, st);

    char *nf = NULL;
    fps_identity_normal_form(2, 2, &nf);
    printf("normal form n=2 c=2: %s\n", nf);
    fps_string_free(nf);

    if (fps_field_new(12, &f) != FPS_STATUS_OK)
        printf("p=12 rejected: %s\n", fps_last_error_message());
    fps_field_free(f);
    return v == 2 ? 0 : 1;
}
