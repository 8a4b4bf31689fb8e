import axios from "axios";

export function sendProfile(email) {
  const url = "/api/profile";
  return axios.post(url, email);
}

export function storeLocation(latitude, longitude) {
  localStorage.setItem("lat", latitude);
  localStorage.setItem("lng", longitude);
}
