/* Copyright 2026 qdatabus Contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Minimal C client: builds a transfer chain, evolves a squeezed state and
 * checks status codes and error reporting. Prints one value on success. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "qdatabus.h"

#define CHECK(call)                                                        \
    do {                                                                   \
        QdbStatus s_ = (call);                                             \
        if (s_ != QDB_STATUS_OK) {                                         \
            char msg_[256];                                                \
            qdb_last_error_message(msg_, sizeof msg_);                     \
            fprintf(stderr, "%s failed (%d): %s\n", #call, (int)s_, msg_); \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    QdbChain *chain = NULL;
    QdbState *state = NULL;
    size_t n = 0;
    double efficiency = 0.0, received = 0.0, initial = 0.0;

    CHECK(qdb_chain_new(20, 1.0, &chain));
    CHECK(qdb_chain_add_probe(chain, "a", 1, 0.015, 0.0));
    CHECK(qdb_chain_add_probe(chain, "b", 11, 0.015, 0.0));
    CHECK(qdb_chain_set_spectator(chain, true));
    CHECK(qdb_chain_mode_count(chain, &n));
    if (n != 23) {
        fprintf(stderr, "unexpected mode count %zu\n", n);
        return 1;
    }
    CHECK(qdb_state_two_mode_squeezed(chain, 1.0, "a", "c", &state));
    CHECK(qdb_state_pair_log_negativity(state, 20, 22, QDB_LOG_BASE_NATURAL, &initial));
    CHECK(qdb_state_evolve(chain, state, 3000.0));
    CHECK(qdb_state_pair_log_negativity(state, 21, 22, QDB_LOG_BASE_NATURAL, &received));
    CHECK(qdb_transfer_efficiency(chain, 1.0, 3000.0, &efficiency));
    if (fabs(received / initial - efficiency) > 1e-9) {
        fprintf(stderr, "state path %.17g vs transfer path %.17g\n", received / initial, efficiency);
        return 1;
    }
    if (qdb_chain_add_probe(chain, "x", 99, 0.1, 0.0) != QDB_STATUS_INVALID_ARGUMENT ||
        qdb_last_error_message(NULL, 0) <= 1) {
        fprintf(stderr, "invalid probe site was not reported\n");
        return 1;
    }
    qdb_state_free(state);
    qdb_chain_free(chain);
    printf("%s %.17g\n", qdb_version(), efficiency);
    return 0;
}
