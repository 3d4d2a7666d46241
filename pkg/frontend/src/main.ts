/** Entry point: hash routing between the meeting list and one session. */

import { ApiClient, ApiError } from "./api.js";
import { attachKeyboard } from "./keyboard.js";
import { renderFatal, renderMeetingList, renderSession, Handlers } from "./render.js";
import { SessionController } from "./state.js";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app container");
}

const api = new ApiClient("");
const controller = new SessionController(api, (state) => renderSession(root, state, handlers));

const handlers: Handlers = {
  onSelect: (tSeg) => {
    const state = controller.state;
    if (state) {
      controller.select(tSeg - state.selected);
    }
  },
  onAssign: (rSeg) => {
    const state = controller.state;
    if (state) {
      void controller.reassign(state.selected, rSeg);
    }
  },
  onToggleIrrelevant: (tSeg) => void controller.toggleIrrelevant(tSeg),
  onSubmit: () => {
    if (window.confirm("Submit this alignment as final?")) {
      void controller
        .submit()
        .then((score) => window.alert(`Submitted. Untouched fraction: ${score.toFixed(2)}`))
        .catch(showError);
    }
  },
  onDismiss: () => controller.dismissBanner(),
};

function showError(err: unknown): void {
  const message = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
  renderFatal(root!, message);
}

async function route(): Promise<void> {
  const meetingId = decodeURIComponent(window.location.hash.replace(/^#/, ""));
  if (!meetingId) {
    try {
      const meetings = await api.listMeetings();
      renderMeetingList(root!, meetings, (id) => {
        window.location.hash = `#${encodeURIComponent(id)}`;
      });
    } catch (err) {
      showError(err);
    }
    return;
  }
  try {
    await controller.load(meetingId);
  } catch (err) {
    showError(err);
  }
}

attachKeyboard(window, (action) => {
  if (!controller.state) {
    return;
  }
  switch (action.kind) {
    case "select":
      controller.select(action.delta);
      break;
    case "retarget":
      void controller.retarget(action.delta);
      break;
    case "toggle-irrelevant":
      void controller.toggleIrrelevant();
      break;
    case "dismiss":
      controller.dismissBanner();
      break;
  }
});

window.addEventListener("hashchange", () => void route());
void route();
