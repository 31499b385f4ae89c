/* C interface to the tokeq startup-financing solver. */

#ifndef TOKEQ_H
#define TOKEQ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible entry point.
typedef enum TokeqStatus {
  TokeqStatus_Ok = 0,
  // A required pointer argument was null.
  TokeqStatus_NullPointer = 1,
  // Parameter validation failed.
  TokeqStatus_InvalidParams = 2,
  // The whole equity share is worth less than the required investment.
  TokeqStatus_CannotFinance = 3,
  // A limiting parameter combination makes the quantity undefined.
  TokeqStatus_Degenerate = 4,
  // The token cannot raise any funds at these liquidity parameters.
  TokeqStatus_IlliquidToken = 5,
  // No admissible fixed-point root in the search bracket.
  TokeqStatus_NoEquilibrium = 6,
  // The root search exhausted its iteration budget.
  TokeqStatus_NoConvergence = 7,
} TokeqStatus;

// Opaque handle to a validated parameter set.
typedef struct TokeqParams TokeqParams;

// Equity equilibrium as plain data.
typedef struct TokeqEquitySolution {
  // Share price.
  double q;
  // Fraction of the share sold.
  double e;
  // Gross required return.
  double r_equity;
  // Entrepreneur final-period consumption.
  double payoff;
  // Early consumer's consumption.
  double c1;
  // Late consumer's consumption.
  double c2;
  // Required-return markup for consumption risk (1 when risk neutral).
  double risk_premium_factor;
  // Fixed-point iterations (0 for closed-form paths).
  uint32_t iterations;
  // Fixed-point residual at the solution.
  double residual;
  // True when several admissible roots existed and the
  // cheapest-financing one was returned.
  bool multiple_roots;
} TokeqEquitySolution;

// Token equilibrium as plain data.
typedef struct TokeqTokenSolution {
  // Launch token price.
  double p0;
  // Tokens sold at launch.
  double t0;
  // Gross required return.
  double r_token;
  // Entrepreneur final-period consumption.
  double payoff;
  // Early consumer's consumption.
  double c1;
  // Late consumer's consumption.
  double c2;
  // Share of expected marginal utility earned by final-period sales
  // (1 when risk neutral).
  double smoothing_ratio;
  // Entrepreneur's new middle-period issuance.
  double t1_new;
  // Entrepreneur's new final-period issuance.
  double t2_new;
  // True when either new-issuance quantity is negative.
  bool feasibility_warning;
  // Fixed-point iterations (0 for closed-form paths).
  uint32_t iterations;
  // Fixed-point residual at the solution.
  double residual;
  // True when several admissible roots existed.
  bool multiple_roots;
} TokeqTokenSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a NUL-terminated static string.
const char *tokeq_version(void);

// Short NUL-terminated description of a status code.
const char *tokeq_status_message(enum TokeqStatus status);

// Allocates the stock example parameter point.
//
// Free with [`tokeq_params_free`].
struct TokeqParams *tokeq_params_default(void);

// Validates and allocates a parameter set, storing the handle in `out`.
//
// # Safety
// `out` must be a valid pointer to a `TokeqParams*` slot.
enum TokeqStatus tokeq_params_new(double r,
                                  double lambda,
                                  double phi1,
                                  double phi2,
                                  double y1,
                                  double y2,
                                  double omega,
                                  double invest,
                                  double wealth,
                                  double sigma,
                                  struct TokeqParams **out);

// Releases a handle returned by `tokeq_params_default` or
// `tokeq_params_new`. Null is a no-op.
//
// # Safety
// `params` must be a handle from this library, not yet freed.
void tokeq_params_free(struct TokeqParams *params);

// Future value of operating profit for this parameter set.
//
// # Safety
// `params` and `out` must be valid pointers.
enum TokeqStatus tokeq_future_profit(const struct TokeqParams *params, double *out);

// Entrepreneur payoff when financing at the risk-free rate.
//
// # Safety
// `params` and `out` must be valid pointers.
enum TokeqStatus tokeq_bond_benchmark(const struct TokeqParams *params, double *out);

// Solves the equity equilibrium, dispatching on the stored curvature.
//
// # Safety
// `params` and `out` must be valid pointers.
enum TokeqStatus tokeq_solve_equity(const struct TokeqParams *params,
                                    struct TokeqEquitySolution *out);

// Solves the token equilibrium, dispatching on the stored curvature.
//
// # Safety
// `params` and `out` must be valid pointers.
enum TokeqStatus tokeq_solve_token(const struct TokeqParams *params,
                                   struct TokeqTokenSolution *out);

// Analytic derivatives of the risk-neutral token payoff with respect to
// the two liquidity fractions.
//
// # Safety
// All pointers must be valid.
enum TokeqStatus tokeq_payoff_derivatives(const struct TokeqParams *params,
                                          double *out_d_phi1,
                                          double *out_d_phi2);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOKEQ_H */
