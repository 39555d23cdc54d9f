/** Collapse bursts of style updates into at most one invocation per window:
 * the first call of a burst schedules a single flush `windowMs` later, and
 * every call until then only refreshes the pending arguments. The flush runs
 * with the latest arguments, so the final slider position always renders. */
export function throttle<A extends unknown[]>(
  fn: (...args: A) => void,
  windowMs = 500,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let pending: A;
  return (...args: A) => {
    pending = args;
    if (timer === null) {
      timer = setTimeout(() => {
        timer = null;
        fn(...pending);
      }, windowMs);
    }
  };
}
