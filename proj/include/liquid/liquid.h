#ifndef LIQUID_LIQUID_H
#define LIQUID_LIQUID_H

/*
 * C interface to the liquid ledger core.
 *
 * All handles are opaque. Structured values cross the boundary as UTF-8 JSON
 * strings; strings returned through `char **out` are heap allocated and must
 * be released with liquid_string_free. On any status other than LIQUID_OK the
 * out parameters are left untouched and liquid_last_error() describes the
 * failure (thread local, valid until the next call on the same thread).
 *
 * Unit ids are 64-character lowercase hex strings.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(LIQUID_BUILDING_LIBRARY)
#    define LIQUID_API __declspec(dllexport)
#  else
#    define LIQUID_API __declspec(dllimport)
#  endif
#else
#  define LIQUID_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum liquid_status {
    LIQUID_OK = 0,
    LIQUID_E_ARGUMENT = 1,   /* null pointer, malformed hex/JSON, bad option */
    LIQUID_E_REJECTED = 2,   /* ledger validation rejected an entry */
    LIQUID_E_CORRUPT = 3,    /* unreadable, tampered or non-replaying file */
    LIQUID_E_DECRYPT = 4,    /* wrong passphrase or damaged ciphertext */
    LIQUID_E_STATE = 5,      /* operation not valid in the current state */
    LIQUID_E_IO = 6,
    LIQUID_E_INTERNAL = 7
} liquid_status;

typedef struct liquid_wallet liquid_wallet_t;
typedef struct liquid_ledger liquid_ledger_t;
typedef struct liquid_option liquid_option_t;

LIQUID_API const char *liquid_version(void);
LIQUID_API const char *liquid_status_name(liquid_status status);
LIQUID_API const char *liquid_last_error(void);
LIQUID_API void liquid_string_free(char *s);

/* ---- wallet ------------------------------------------------------------ */

/* profile: "llv1" or "toy"; NULL means llv1. */
LIQUID_API liquid_status liquid_wallet_create(const char *profile, liquid_wallet_t **out);
LIQUID_API liquid_status liquid_wallet_from_mnemonic(const char *mnemonic, liquid_wallet_t **out);
LIQUID_API liquid_status liquid_wallet_load(const char *path, const char *passphrase, liquid_wallet_t **out);
LIQUID_API liquid_status liquid_wallet_save(const liquid_wallet_t *w, const char *path, const char *passphrase);
LIQUID_API void liquid_wallet_free(liquid_wallet_t *w);

LIQUID_API liquid_status liquid_wallet_mnemonic(const liquid_wallet_t *w, char **out);
/* GenesisRegistration JSON for a fresh unit owned by this wallet. */
LIQUID_API liquid_status liquid_wallet_register(liquid_wallet_t *w, char **registration_json);
LIQUID_API liquid_status liquid_wallet_offer_delegation(liquid_wallet_t *w, char **offer_json);
LIQUID_API liquid_status liquid_wallet_announce(const liquid_wallet_t *w, const char *unit_hex, char **announce_json);
LIQUID_API liquid_status liquid_wallet_offer_transfer(liquid_wallet_t *w, const char *announce_json,
                                                     char **offer_json);
/* Spends `unit_hex` against a delegation or transfer offer (dispatch on the
 * offer's "kind"). Returns the signed entry; nothing is submitted. */
LIQUID_API liquid_status liquid_wallet_send(liquid_wallet_t *w, const char *unit_hex, const char *offer_json,
                                           char **entry_json);
/* Builds a reversal for the stub whose delegated output is `stub_unit_hex`. */
LIQUID_API liquid_status liquid_wallet_reverse(liquid_wallet_t *w, const char *stub_unit_hex,
                                              const liquid_ledger_t *ledger, char **entry_json);
/* Detects incoming units; returns {"received":[...],"unclaimable":[...]}. */
LIQUID_API liquid_status liquid_wallet_sync(liquid_wallet_t *w, const liquid_ledger_t *ledger, char **scan_json);
/* Owned units and stubs without secrets. `ledger` may be NULL. */
LIQUID_API liquid_status liquid_wallet_units(const liquid_wallet_t *w, const liquid_ledger_t *ledger,
                                            char **units_json);

/* ---- ledger ------------------------------------------------------------ */

/* registrations_json: array of GenesisRegistration; registry_json may be NULL. */
LIQUID_API liquid_status liquid_ledger_genesis(const char *registrations_json, const char *registry_json,
                                              liquid_ledger_t **out);
LIQUID_API liquid_status liquid_ledger_load(const char *path, liquid_ledger_t **out);
LIQUID_API liquid_status liquid_ledger_save(const liquid_ledger_t *l, const char *path);
LIQUID_API void liquid_ledger_free(liquid_ledger_t *l);

/* Validation only. LIQUID_E_REJECTED when the verdict is a rejection. */
LIQUID_API liquid_status liquid_ledger_check(const liquid_ledger_t *l, const char *entry_json, char **verdict_json);
/* Appends one slot from an entry or an array of entries; returns the array
 * of verdicts. LIQUID_E_REJECTED if any entry was rejected. */
LIQUID_API liquid_status liquid_ledger_append(liquid_ledger_t *l, const char *entries_json, char **verdicts_json);
LIQUID_API liquid_status liquid_ledger_finalize(liquid_ledger_t *l);
/* {"live":[...sorted...],"frozen":bool,"state_hash":"..."} */
LIQUID_API liquid_status liquid_ledger_state(const liquid_ledger_t *l, char **state_json);
/* {"unit","known","live","parent","child","depth"} for any id. */
LIQUID_API liquid_status liquid_ledger_unit(const liquid_ledger_t *l, const char *unit_hex, char **json);
LIQUID_API liquid_status liquid_ledger_info(const liquid_ledger_t *l, char **info_json);
/* Full replay of a ledger file; LIQUID_E_CORRUPT with a report on failure. */
LIQUID_API liquid_status liquid_ledger_verify_file(const char *path, char **report_json);

/* ---- options and tally ------------------------------------------------- */

LIQUID_API liquid_status liquid_option_create(const char *label, liquid_option_t **out);
/* Option files hold the option's seed and vote nonces in plaintext. */
LIQUID_API liquid_status liquid_option_load(const char *path, liquid_option_t **out);
LIQUID_API liquid_status liquid_option_save(const liquid_option_t *o, const char *path);
LIQUID_API void liquid_option_free(liquid_option_t *o);
/* {"label":"...","public_key":"..."} */
LIQUID_API liquid_status liquid_option_public(const liquid_option_t *o, char **json);
LIQUID_API liquid_status liquid_option_vote_offer(liquid_option_t *o, const char *announce_json, char **offer_json);
/* Claimed unit ids recorded on the ledger (no nonces). */
LIQUID_API liquid_status liquid_option_declare(const liquid_option_t *o, const liquid_ledger_t *l, char **json);
/* VoteReveal including plaintext nonces. */
LIQUID_API liquid_status liquid_option_reveal(const liquid_option_t *o, const liquid_ledger_t *l, char **json);

/* Builds an option registry {"version","options":{label:pk}} from an array
 * of option public descriptors. */
LIQUID_API liquid_status liquid_registry_build(const char *options_json, char **registry_json);

/* reveals_json: array of VoteReveal. registry_json may be NULL to use the
 * registry stored in the ledger header. The ledger must be finalized. */
LIQUID_API liquid_status liquid_tally(const liquid_ledger_t *l, const char *reveals_json, const char *registry_json,
                                     char **result_json);
/* declared_json: {label:[unit,...]}. */
LIQUID_API liquid_status liquid_preliminary_tally(const liquid_ledger_t *l, const char *declared_json,
                                                 char **result_json);

/* ---- simulator --------------------------------------------------------- */

/* Runs a YAML/JSON scenario; returns the metrics report. If ledger_path is
 * not NULL the final ledger is saved there. */
LIQUID_API liquid_status liquid_sim_run(const char *scenario_text, const char *ledger_path, char **report_json);

#ifdef __cplusplus
}
#endif

#endif
