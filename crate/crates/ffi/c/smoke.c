#include <math.h>
#include <stdio.h>

#include "akq.h"

int main(void) {
    printf("akq %s\n", akq_version());

    AkqState *psi = NULL;
    if (akq_state_random(42, &psi) != AKQ_STATUS_OK) {
        fprintf(stderr, "%s\n", akq_last_error());
        return 1;
    }

    double entropy = 0.0;
    akq_entropy(psi, M_PI / 3.0, &entropy);
    printf("entropy at pi/3 = %.15f (ln 2 = %.15f)\n", entropy, log(2.0));

    double excess[3], total;
    if (akq_uncertainty(psi, 0.0, excess, &total) == AKQ_STATUS_SINGULAR) {
        printf("theta = 0 rejected: %s\n", akq_last_error());
    }

    AkqTeleporter *tp = NULL;
    akq_teleporter_new(7, AKQ_SIGN_PLUS, &tp);
    uint32_t rounds = 0;
    double fidelity = 0.0;
    AkqState *out = NULL;
    AkqStatus status = akq_teleport(tp, psi, &rounds, &fidelity, &out);
    printf("teleport status=%d rounds=%u fidelity=%.15f\n", status, rounds, fidelity);

    akq_state_free(out);
    akq_teleporter_free(tp);
    akq_state_free(psi);
    return fidelity > 1.0 - 1e-10 ? 0 : 1;
}
