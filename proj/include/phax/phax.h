#ifndef PHAX_H
#define PHAX_H

/*
 * C interface to the phax argumentation engine.
 *
 * Every function returns a phax_status. On failure the message is available from
 * phax_last_error() until the next call on the same thread. Strings returned through
 * char** outputs are owned by the caller and released with phax_string_free().
 */

#include <stddef.h>

#if defined(_WIN32)
#define PHAX_API __declspec(dllexport)
#else
#define PHAX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum phax_status {
  PHAX_OK = 0,
  PHAX_ERR_PARSE = 1,
  PHAX_ERR_INVALID_ARGUMENT = 2,
  PHAX_ERR_NOT_FOUND = 3,
  PHAX_ERR_INSUFFICIENT = 4,
  PHAX_ERR_LIMIT_EXCEEDED = 5,
  PHAX_ERR_IO = 6,
  PHAX_ERR_INTERNAL = 7
} phax_status;

typedef enum phax_format {
  PHAX_FORMAT_TEXT = 0,
  PHAX_FORMAT_JSON = 1,
  PHAX_FORMAT_MARKDOWN = 2,
  PHAX_FORMAT_DOT = 3
} phax_format;

typedef struct phax_session phax_session; /* a parsed theory and its analysis */
typedef struct phax_af phax_af;           /* an abstract framework read from ICCMA text */

PHAX_API const char* phax_version(void);
PHAX_API const char* phax_status_name(phax_status status);
PHAX_API const char* phax_last_error(void);
PHAX_API void phax_string_free(char* s);

/* Validates a theory file. *report receives diagnostics or a one-line summary, on
   success and on PHAX_ERR_PARSE alike. */
PHAX_API phax_status phax_check_file(const char* path, char** report);

/* `filename` only labels diagnostics and may be NULL. */
PHAX_API phax_status phax_session_open(const char* source, size_t length, const char* filename,
                                       phax_session** out);
PHAX_API phax_status phax_session_open_file(const char* path, phax_session** out);
PHAX_API void phax_session_close(phax_session* session);

PHAX_API phax_status phax_session_serialize(const phax_session* session, char** out);
/* TEXT or JSON */
PHAX_API phax_status phax_session_arguments(const phax_session* session, phax_format format, char** out);
/* semantics: grounded, complete, preferred or stable. TEXT, JSON or DOT (DOT uses the
   first labelling). */
PHAX_API phax_status phax_session_extensions(const phax_session* session, const char* semantics,
                                             phax_format format, char** out);
/* Acceptance of a literal's conclusion: *accepted is 1 or 0. mode: credulous or skeptical. */
PHAX_API phax_status phax_session_accepts(const phax_session* session, const char* literal,
                                          const char* semantics, const char* mode, int* accepted);

typedef struct phax_explain_options {
  const char* target;  /* argument id, label or literal */
  const char* profile; /* bundled name, inline JSON object or JSON file path */
  double alpha, beta, gamma, tau, epsilon;
  size_t max_depth;
  size_t beam_width; /* 0 = unbounded */
  phax_format format;
} phax_explain_options;

PHAX_API void phax_explain_options_init(phax_explain_options* options);
/* PHAX_ERR_INSUFFICIENT when no subtree reaches tau. */
PHAX_API phax_status phax_session_explain(const phax_session* session, const phax_explain_options* options,
                                          char** out);

PHAX_API phax_status phax_af_open(const char* iccma_text, size_t length, phax_af** out);
PHAX_API phax_status phax_af_open_file(const char* path, phax_af** out);
PHAX_API void phax_af_close(phax_af* af);
PHAX_API phax_status phax_af_size(const phax_af* af, size_t* arguments, size_t* attacks);
PHAX_API phax_status phax_af_extensions(const phax_af* af, const char* semantics, phax_format format,
                                        char** out);

/* 1 if the text looks like ICCMA input rather than a theory. */
PHAX_API int phax_is_iccma(const char* text, size_t length);

/* PHAX_PORT when set, else 8080. */
PHAX_API int phax_default_port(void);
/* Blocks serving HTTP until the process ends. state_dir may be NULL. */
PHAX_API phax_status phax_serve(const char* host, int port, const char* state_dir);

#ifdef __cplusplus
}
#endif

#endif
