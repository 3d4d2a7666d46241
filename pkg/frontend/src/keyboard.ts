/**
 * Keyboard bindings for segment-by-segment annotation.
 *
 * Up/Down (or k/j) walk the transcription segments, Left/Right (or h/l)
 * move the selected segment's report target, i toggles the irrelevant
 * flag, Escape dismisses the current banner.
 */

export type Action =
  | { kind: "select"; delta: -1 | 1 }
  | { kind: "retarget"; delta: -1 | 1 }
  | { kind: "toggle-irrelevant" }
  | { kind: "dismiss" };

interface KeyLike {
  key: string;
  ctrlKey?: boolean;
  metaKey?: boolean;
  altKey?: boolean;
  target?: unknown;
}

export function keyToAction(event: KeyLike): Action | null {
  if (event.ctrlKey || event.metaKey || event.altKey) {
    return null;
  }
  switch (event.key) {
    case "ArrowUp":
    case "k":
      return { kind: "select", delta: -1 };
    case "ArrowDown":
    case "j":
      return { kind: "select", delta: 1 };
    case "ArrowLeft":
    case "h":
      return { kind: "retarget", delta: -1 };
    case "ArrowRight":
    case "l":
      return { kind: "retarget", delta: 1 };
    case "i":
      return { kind: "toggle-irrelevant" };
    case "Escape":
      return { kind: "dismiss" };
    default:
      return null;
  }
}

/** True for targets that consume plain keystrokes themselves. */
export function isTextInputLike(target: unknown): boolean {
  if (!target || typeof target !== "object") {
    return false;
  }
  const el = target as { tagName?: string; isContentEditable?: boolean };
  const tag = (el.tagName ?? "").toUpperCase();
  return tag === "INPUT" || tag === "TEXTAREA" || tag === "SELECT" || el.isContentEditable === true;
}

export function attachKeyboard(
  root: { addEventListener: Window["addEventListener"]; removeEventListener: Window["removeEventListener"] },
  dispatch: (action: Action) => void,
): () => void {
  const onKeyDown = (event: KeyboardEvent): void => {
    if (isTextInputLike(event.target)) {
      return;
    }
    const action = keyToAction(event);
    if (action !== null) {
      event.preventDefault();
      dispatch(action);
    }
  };
  root.addEventListener("keydown", onKeyDown);
  return () => root.removeEventListener("keydown", onKeyDown);
}
