#ifndef RELLICH_C_H
#define RELLICH_C_H

/* C interface to the rellich library. Objects are opaque handles released
 * with their *_free function. Every function returning rellich_status leaves
 * a message for rellich_last_error() on failure; the message is per thread. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define RELLICH_API __declspec(dllexport)
#else
#define RELLICH_API __attribute__((visibility("default")))
#endif

typedef enum rellich_status {
  RELLICH_OK = 0,
  RELLICH_E_NULL = 1,       /* a required pointer argument was NULL */
  RELLICH_E_INVALID = 2,    /* invalid argument or incoherent request */
  RELLICH_E_PARSE = 3,      /* malformed expression text */
  RELLICH_E_UNBOUND = 4,    /* expression uses an unbound parameter */
  RELLICH_E_DOMAIN = 5,     /* evaluation outside a primitive's domain */
  RELLICH_E_NUMERICAL = 6,  /* non-convergence or underflow */
  RELLICH_E_IO = 7,
  RELLICH_E_BUFFER = 8,     /* output buffer too small; required size reported */
  RELLICH_E_INTERNAL = 9
} rellich_status;

typedef enum rellich_verdict {
  RELLICH_PASS = 0,
  RELLICH_FAIL = 1,
  RELLICH_INCONCLUSIVE = 2
} rellich_verdict;

typedef struct rellich_expr rellich_expr;
typedef struct rellich_pair rellich_pair;
typedef struct rellich_report rellich_report;

typedef struct rellich_space_form {
  int n;
  double kappa;
  double R; /* INFINITY for an unbounded domain */
} rellich_space_form;

/* Parameter names: n, kappa, lambda, r, R, c, k. */
typedef struct rellich_param {
  const char* name;
  double value;
} rellich_param;

RELLICH_API const char* rellich_version(void);
RELLICH_API const char* rellich_last_error(void);
RELLICH_API const char* rellich_status_name(rellich_status s);

/* Text outputs (print, json, csv) copy into buf with a NUL terminator. With
 * a NULL or short buffer they return RELLICH_E_BUFFER; *needed, when not
 * NULL, always receives the size including the terminator. */

/* Expressions */
RELLICH_API rellich_status rellich_expr_parse(const char* text, rellich_expr** out);
RELLICH_API void rellich_expr_free(rellich_expr* e);
RELLICH_API rellich_status rellich_expr_print(const rellich_expr* e, char* buf, size_t size, size_t* needed);
RELLICH_API rellich_status rellich_expr_eval(const rellich_expr* e, double t, const rellich_param* params,
                                             size_t count, double* out);
/* var is "t" or a parameter name. */
RELLICH_API rellich_status rellich_expr_derivative(const rellich_expr* e, const char* var, rellich_expr** out);

/* Pairs */
RELLICH_API rellich_status rellich_pair_dual(const char* H, const char* v, const char* V,
                                             const rellich_param* params, size_t count, rellich_pair** out);
RELLICH_API rellich_status rellich_pair_primal(const char* G, const char* w, const char* W,
                                               const rellich_param* params, size_t count, rellich_pair** out);
/* role NULL or "" selects the entry's primary spec. The entry's space form
 * is written to *sf when sf is not NULL. Parameters not listed take the
 * entry defaults. */
RELLICH_API rellich_status rellich_pair_catalog(const char* id, const char* role, const rellich_param* params,
                                                size_t count, rellich_pair** out, rellich_space_form* sf);
RELLICH_API void rellich_pair_free(rellich_pair* p);
/* The defining residual of the pair at t. */
RELLICH_API rellich_status rellich_pair_residual(const rellich_pair* p, const rellich_space_form* sf, double t,
                                                 double* out);
RELLICH_API rellich_status rellich_pair_e1(const rellich_pair* p, const rellich_space_form* sf, double t, double* out);
RELLICH_API rellich_status rellich_pair_e2(const rellich_pair* p, const rellich_space_form* sf, double t, double* out);

/* Runs one command line (arguments without the program name) and keeps its
 * report. argv uses the same syntax as the rellich executable; the output
 * path, when given, is written as well. */
RELLICH_API rellich_status rellich_run(int argc, const char* const* argv, rellich_report** out);
RELLICH_API void rellich_report_free(rellich_report* r);
RELLICH_API rellich_verdict rellich_report_verdict(const rellich_report* r);
RELLICH_API int rellich_report_exit_code(const rellich_report* r);
RELLICH_API size_t rellich_report_test_count(const rellich_report* r);
RELLICH_API size_t rellich_report_scan_count(const rellich_report* r);
RELLICH_API rellich_status rellich_report_json(const rellich_report* r, char* buf, size_t size, size_t* needed);
RELLICH_API rellich_status rellich_report_csv(const rellich_report* r, char* buf, size_t size, size_t* needed);

/* The whole command-line program, argv[0] being the program name. Report to
 * stdout or --output, messages to stderr. Returns the process exit code (0 pass, 1 fail, 2 inconclusive,
 * 64 usage, 74 I/O). */
RELLICH_API int rellich_main(int argc, const char* const* argv);

#ifdef __cplusplus
}
#endif

#endif
