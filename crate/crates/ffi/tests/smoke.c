#include <stdio.h>

#include "modsm.h"

int main(void) {
    ModsmModule *m = NULL;
    if (modsm_module_parse_text("a :- not b. b :- not a. c :- a.", &m) != MODSM_STATUS_OK) {
        fprintf(stderr, "%s\n", modsm_last_error());
        return 1;
    }
    ModsmModelSet *models = NULL;
    if (modsm_stable_models(m, 0, &models) != MODSM_STATUS_OK) {
        return 1;
    }
    for (size_t i = 0; i < modsm_model_set_len(models); i++) {
        printf("%s\n", modsm_model_set_get(models, i));
    }
    modsm_model_set_free(models);
    modsm_module_free(m);

    ModsmModule *p = NULL, *q = NULL, *j = NULL;
    modsm_module_parse_text("#input b. #output a. a :- b.", &p);
    modsm_module_parse_text("#input a. #output b. b :- a.", &q);
    ModsmStatus s = modsm_join(p, q, &j);
    printf("join: %d %s\n", (int)s, modsm_last_error());
    modsm_module_free(p);
    modsm_module_free(q);
    return j == NULL ? 0 : 1;
}
