/* Links against the static library through the generated header. */
#include <stdio.h>
#include <string.h>

#include "enricat.h"

static const char *ARROWS =
    "{\"schema\": 1, \"base\": {\"tag\": \"finset\"},"
    " \"maps\": {\"f\": {\"src\": 0, \"tgt\": 2, \"data\": []},"
    "           \"gbar\": {\"src\": 0, \"tgt\": 0, \"data\": []}},"
    " \"categories\": {\"H\": {\"objects\": [\"x\", \"y\"],"
    "   \"homs\": {\"x→x\": 1, \"y→y\": 1},"
    "   \"comp\": {\"x→x→x\": [0], \"y→y→y\": [0]},"
    "   \"idm\": {\"x\": [0], \"y\": [0]}}}}";

int main(void) {
    EnricatInstance *inst = NULL;
    char *out = NULL;
    if (enricat_instance_parse(ARROWS, &inst) != ENRICAT_STATUS_PASS) {
        fprintf(stderr, "parse: %s\n", enricat_last_error());
        return 1;
    }
    EnricatStatus s = enricat_pushout(
        inst, "{\"a\": \"x\", \"b\": \"y\", \"f\": \"f\", \"gbar\": \"gbar\"}", 4, &out);
    if (s != ENRICAT_STATUS_PASS || strstr(out, "\"stabilized\": true") == NULL) {
        fprintf(stderr, "pushout: %d\n", (int)s);
        return 1;
    }
    enricat_string_free(out);
    enricat_instance_free(inst);
    if (enricat_instance_parse("{", &inst) != ENRICAT_STATUS_INPUT_ERROR ||
        enricat_last_error() == NULL) {
        return 1;
    }
    printf("ok %s\n", enricat_version());
    return 0;
}
