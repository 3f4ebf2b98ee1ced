#include <stdio.h>
#include <string.h>

#include "acyclic_rewriter.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    ArPresentation *p = NULL;
    CHECK(ar_presentation_parse("generators: a b c\nrelation: a b = b c\n", &p) == AR_STATUS_OK);
    CHECK(ar_presentation_generators(p) == 3);

    ArAnswer a;
    char *witness = NULL;
    CHECK(ar_decide(p, AR_QUERY_KIND_DIVIDES_LEFT, AR_MODE_DEFAULT, "a b b", "b c", 0, 0, &a, &witness) == AR_STATUS_OK);
    CHECK(a == AR_ANSWER_YES);
    CHECK(strstr(witness, "\"residual\":\"b\"") != NULL);
    ar_string_free(witness);

    CHECK(ar_decide(p, AR_QUERY_KIND_EQUAL, AR_MODE_DEFAULT, "a b", "b a", 0, 0, &a, NULL) == AR_STATUS_OK);
    CHECK(a == AR_ANSWER_NO);
    CHECK(ar_oracle(p, AR_QUERY_KIND_EQUAL, "a b", "b c", 0, 0, &a) == AR_STATUS_OK);
    CHECK(a == AR_ANSWER_YES);

    CHECK(ar_decide(p, AR_QUERY_KIND_EQUAL, AR_MODE_DEFAULT, "a z", "a", 0, 0, &a, NULL) == AR_STATUS_INVALID_WORD);
    CHECK(ar_last_error() != NULL);
    ar_presentation_free(p);

    CHECK(ar_presentation_parse("generators: a b\nrelation: a b a = a b\n", &p) == AR_STATUS_NOT_CYCLE_FREE);
    CHECK(p == NULL);
    CHECK(strstr(ar_last_error(), "loop at a") != NULL);
    printf("ok %s\n", ar_version());
    return 0;
}
