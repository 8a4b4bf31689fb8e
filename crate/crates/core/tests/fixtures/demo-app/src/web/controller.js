import { sendProfile, storeLocation } from "../services/profile.js";
import { logLogin } from "../services/audit.js";
import { clamp } from "../util/format.js";

export function onSubmit(phoneNumber) {
  return sendProfile(phoneNumber);
}

export function onLogin(session) {
  logLogin(session.user, session.origin);
}

export function onMove(x, y) {
  storeLocation(clamp(x, -90, 90), clamp(y, -180, 180));
}
